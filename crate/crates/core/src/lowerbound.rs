//! Lower bounds on the quasi-threshold edit distance.
//!
//! Whenever an edge `{u, v}` has a positive pseudo counter, some P4 has it as
//! central edge or some C4 runs through it, and at least one edit touching
//! `u` or `v` is unavoidable. Removing both nodes and repeating yields
//! node-disjoint witnesses, each worth one edit.

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::graph::{count_triangles, pseudo_counter_value, Graph, TriangleCounts};
use crate::rng;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundResult {
    pub bound: usize,
    /// The removed witness pairs, in removal order.
    pub removed_pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BoundOptions {
    /// Re-sort the remaining nodes by current degree after every removal
    /// instead of keeping the initial ascending-degree order.
    pub resort: bool,
}

/// Residual graph state: live nodes, current degrees and maintained
/// triangle counters over the original adjacency.
struct Residual<'g> {
    g: &'g Graph,
    alive: Vec<bool>,
    degree: Vec<usize>,
    tri: TriangleCounts,
    mark: Vec<bool>,
}

impl<'g> Residual<'g> {
    fn new(g: &'g Graph) -> Self {
        Residual {
            g,
            alive: vec![true; g.node_count()],
            degree: g.nodes().map(|u| g.degree(u)).collect(),
            tri: count_triangles(g),
            mark: vec![false; g.node_count()],
        }
    }

    fn pc(&self, u: usize, i: usize, v: usize) -> u64 {
        pseudo_counter_value(self.degree[u], self.degree[v], self.tri.at(u, i) as usize)
    }

    /// Live neighbor of `u` with minimal current degree among those with a
    /// positive pseudo counter.
    fn witness_partner(&self, u: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, &v) in self.g.neighbors(u).iter().enumerate() {
            if !self.alive[v] || self.pc(u, i, v) == 0 {
                continue;
            }
            if best.is_none_or(|b| self.degree[v] < self.degree[b]) {
                best = Some(v);
            }
        }
        best
    }

    /// Deletes `u` with all incident live edges. Every triangle through `u`
    /// loses one count on its opposite edge.
    fn remove(&mut self, u: usize) {
        let g = self.g;
        self.alive[u] = false;
        for &x in g.neighbors(u) {
            if self.alive[x] {
                self.mark[x] = true;
            }
        }
        for &x in g.neighbors(u) {
            if !self.alive[x] {
                continue;
            }
            self.degree[x] -= 1;
            for (i, &w) in g.neighbors(x).iter().enumerate() {
                if self.mark[w] {
                    *self.tri.slot_mut(x, i) -= 1;
                }
            }
        }
        for &x in g.neighbors(u) {
            self.mark[x] = false;
        }
    }

    /// Triangle counts of the residual graph match the maintained counters.
    #[cfg(test)]
    fn consistent(&self) -> bool {
        let g = self.g;
        g.nodes().filter(|&u| self.alive[u]).all(|u| {
            g.neighbors(u)
                .iter()
                .enumerate()
                .filter(|&(_, &v)| self.alive[v])
                .all(|(i, &v)| {
                    let common = g
                        .neighbors(u)
                        .iter()
                        .filter(|&&w| self.alive[w] && w != v && g.has_edge(v, w))
                        .count();
                    common == self.tri.at(u, i) as usize
                })
        })
    }
}

/// Ascending initial degree with a seeded random order inside each degree.
fn ascending_order(g: &Graph, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = g.nodes().collect();
    order.shuffle(&mut rng::seeded(seed));
    order.sort_by_key(|&u| g.degree(u));
    order
}

pub fn lower_bound(g: &Graph, seed: u64) -> BoundResult {
    lower_bound_with(g, seed, BoundOptions::default())
}

pub fn lower_bound_with(g: &Graph, seed: u64, opts: BoundOptions) -> BoundResult {
    let mut state = Residual::new(g);
    let mut result = BoundResult::default();
    let order = ascending_order(g, seed);
    if opts.resort {
        // repeatedly pick the live node of least current degree that has a witness
        let rank: Vec<usize> = {
            let mut r = vec![0; g.node_count()];
            for (i, &u) in order.iter().enumerate() {
                r[u] = i;
            }
            r
        };
        loop {
            let next = g
                .nodes()
                .filter(|&u| state.alive[u])
                .filter_map(|u| state.witness_partner(u).map(|v| (u, v)))
                .min_by_key(|&(u, _)| (state.degree[u], rank[u]));
            let Some((u, v)) = next else { break };
            state.remove(u);
            state.remove(v);
            result.removed_pairs.push((u, v));
        }
    } else {
        for &u in &order {
            if !state.alive[u] {
                continue;
            }
            if let Some(v) = state.witness_partner(u) {
                state.remove(u);
                state.remove(v);
                result.removed_pairs.push((u, v));
            }
        }
    }
    result.bound = result.removed_pairs.len();
    result
}
