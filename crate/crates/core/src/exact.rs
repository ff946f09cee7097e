//! Exact solvers for small instances: the bounded search tree over the six
//! edits of a forbidden subgraph, and exhaustive enumeration as an oracle.

use std::collections::{HashMap, VecDeque};
use std::sync::{Mutex, OnceLock};

use crate::edit::{Edit, EditSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lowerbound::lower_bound;
use crate::recognition::{recognize, Certificate, ForbiddenKind, Recognition};

/// Largest node count [`brute_force_optimum`] accepts.
pub const BRUTE_FORCE_MAX_NODES: usize = 6;

/// The six edits that each destroy the witness: every pattern edge deleted,
/// every missing pair inserted.
pub fn branch_edits(c: &Certificate) -> [Edit; 6] {
    let [a, b, x, d] = c.nodes;
    match c.kind {
        ForbiddenKind::P4 => [
            Edit::delete(a, b),
            Edit::delete(b, x),
            Edit::delete(x, d),
            Edit::insert(a, x),
            Edit::insert(b, d),
            Edit::insert(a, d),
        ],
        ForbiddenKind::C4 => [
            Edit::delete(a, b),
            Edit::delete(b, x),
            Edit::delete(x, d),
            Edit::delete(d, a),
            Edit::insert(a, x),
            Edit::insert(b, d),
        ],
    }
}

/// Bounded search tree configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BranchSolver {
    /// Cut branches whose remaining budget is below the disjoint-witness
    /// lower bound of the current graph.
    pub prune_with_lower_bound: bool,
}

impl Default for BranchSolver {
    fn default() -> Self {
        BranchSolver {
            prune_with_lower_bound: true,
        }
    }
}

impl BranchSolver {
    /// Minimum edit set of size at most `k_max`, or `None`. Budgets are tried
    /// in increasing order so the first hit is optimal.
    pub fn solve(&self, g: &Graph, k_max: usize) -> Option<EditSet> {
        let mut work = g.clone();
        let mut blocked = std::collections::HashSet::new();
        let mut path = Vec::new();
        for budget in 0..=k_max {
            if self.search(&mut work, budget, &mut blocked, &mut path) {
                return Some(path.into_iter().collect());
            }
        }
        None
    }

    fn search(
        &self,
        g: &mut Graph,
        budget: usize,
        blocked: &mut std::collections::HashSet<(usize, usize)>,
        path: &mut Vec<Edit>,
    ) -> bool {
        let cert = match recognize(g) {
            Recognition::QuasiThreshold(_) => return true,
            Recognition::Forbidden(c) => c,
        };
        if budget == 0 {
            return false;
        }
        if self.prune_with_lower_bound && budget > 1 && lower_bound(g, 0).bound > budget {
            return false;
        }
        for e in branch_edits(&cert) {
            if blocked.contains(&e.pair()) {
                continue;
            }
            e.apply(g).expect("branch edits match the certificate");
            blocked.insert(e.pair());
            path.push(e);
            if self.search(g, budget - 1, blocked, path) {
                e.revert(g);
                return true;
            }
            path.pop();
            blocked.remove(&e.pair());
            e.revert(g);
        }
        false
    }
}

/// Minimum quasi-threshold edit set of size at most `k_max`.
pub fn bst_solve(g: &Graph, k_max: usize) -> Option<EditSet> {
    BranchSolver::default().solve(g, k_max)
}

fn pair_index(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

fn mask_of(g: &Graph, pairs: &[(usize, usize)]) -> u32 {
    pairs
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| g.has_edge(u, v))
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// Distance from every labeled graph on `n` nodes to the nearest graph that
/// [`recognize`] accepts, by multi-source BFS over single-pair flips.
fn optimum_table(n: usize) -> &'static [u8] {
    static TABLES: OnceLock<Mutex<HashMap<usize, &'static [u8]>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().expect("table lock").get(&n) {
        return t;
    }
    let pairs = pair_index(n);
    let total = 1usize << pairs.len();
    let mut dist = vec![u8::MAX; total];
    let mut queue = VecDeque::new();
    for (mask, d) in dist.iter_mut().enumerate() {
        let g = Graph::from_edges(
            n,
            pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e),
        );
        if recognize(&g).is_quasi_threshold() {
            *d = 0;
            queue.push_back(mask);
        }
    }
    while let Some(mask) = queue.pop_front() {
        for bit in 0..pairs.len() {
            let next = mask ^ (1 << bit);
            if dist[next] == u8::MAX {
                dist[next] = dist[mask] + 1;
                queue.push_back(next);
            }
        }
    }
    let table: &'static [u8] = Box::leak(dist.into_boxed_slice());
    tables.lock().expect("table lock").insert(n, table);
    table
}

/// Minimum `|E Δ E'|` over all graphs `E'` on the same nodes that
/// [`recognize`] accepts, by exhaustive enumeration.
pub fn brute_force_optimum(g: &Graph) -> Result<usize> {
    let n = g.node_count();
    if n > BRUTE_FORCE_MAX_NODES {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_NODES,
        });
    }
    let table = optimum_table(n);
    Ok(table[mask_of(g, &pair_index(n)) as usize] as usize)
}
