//! Initial skeleton heuristic and edit counting for arbitrary forests.
//!
//! The heuristic is the recognition sweep with conflict resolution: when a
//! processed node `u` meets an unprocessed neighbor `v` with a different
//! parent, triangle counts and the pseudo C4/P4 counter decide whether `v`
//! is worth keeping as a child, and the kept children elect `u`'s parent.

use crate::error::{Error, Result};
use crate::forest::SkeletonForest;
use crate::graph::{pseudo_counter_value, Graph, TriangleCounts};
use crate::recognition::degree_order_desc;

/// `|E(g) Δ E(closure(f))|` without materializing the closure.
pub fn count_edits(g: &Graph, f: &SkeletonForest) -> Result<usize> {
    if f.node_count() != g.node_count() {
        return Err(Error::InvalidForest(format!(
            "forest has {} nodes, graph has {}",
            f.node_count(),
            g.node_count()
        )));
    }
    let (pre, post) = f.intervals();
    let related = |a: usize, b: usize| {
        (pre[a] < pre[b] && post[b] < post[a]) || (pre[b] < pre[a] && post[a] < post[b])
    };
    let kept = g.edges().filter(|&(u, v)| related(u, v)).count();
    let inserts = f.closure_size() - kept;
    let deletes = g.edge_count() - kept;
    Ok(inserts + deletes)
}

/// Builds a skeleton for `g` guided by the triangle counts `t`, which must be
/// `count_triangles(g)`. The graph itself is never modified.
pub fn initial_skeleton(g: &Graph, t: &TriangleCounts) -> SkeletonForest {
    let n = g.node_count();
    let order = degree_order_desc(g);
    let mut parent: Vec<Option<usize>> = vec![None; n];
    // adoption counter; only equals the tree depth for never-reassigned chains
    let mut depth = vec![0usize; n];
    let mut processed = vec![false; n];
    // pinned[u] = Some(p) marks p_c({u, p}) as infinite
    let mut pinned: Vec<Option<usize>> = vec![None; n];

    let mut votes = vec![0usize; n + 1];
    let mut candidates: Vec<usize> = Vec::new();
    const ROOT: usize = usize::MAX;
    let slot_of = |p: Option<usize>| p.unwrap_or(n);

    for &u in &order {
        processed[u] = true;

        // p_c of {v, p(v)}; a root has no competing parent edge
        let parent_pc = |v: usize, parent: &[Option<usize>], pinned: &[Option<usize>]| -> u64 {
            match parent[v] {
                None => u64::MAX,
                Some(p) if pinned[v] == Some(p) || pinned[p] == Some(v) => u64::MAX,
                Some(p) => {
                    let i = g.slot(v, p).expect("skeleton parents are neighbors in g");
                    pseudo_counter_value(g.degree(v), g.degree(p), t.at(v, i) as usize)
                }
            }
        };
        let edge_pc = |i: usize, v: usize, pinned: &[Option<usize>]| -> u64 {
            if pinned[u] == Some(v) || pinned[v] == Some(u) {
                u64::MAX
            } else {
                pseudo_counter_value(g.degree(u), g.degree(v), t.at(u, i) as usize)
            }
        };

        // preliminary children with non-strict comparisons
        for (i, &v) in g.neighbors(u).iter().enumerate() {
            if processed[v] {
                continue;
            }
            let tri = t.at(u, i) as usize;
            let keep = parent[u] == parent[v]
                || (edge_pc(i, v, &pinned) <= parent_pc(v, &parent, &pinned)
                    && depth[v] <= tri + 1);
            if keep {
                let s = slot_of(parent[v]);
                if votes[s] == 0 {
                    candidates.push(s);
                }
                votes[s] += 1;
            }
        }

        // majority vote; ties prefer the current parent, then the smallest id,
        // with the virtual root ordered last
        if !candidates.is_empty() {
            let current = slot_of(parent[u]);
            let best = candidates
                .iter()
                .copied()
                .max_by(|&a, &b| {
                    votes[a]
                        .cmp(&votes[b])
                        .then_with(|| (a == current).cmp(&(b == current)))
                        .then_with(|| b.cmp(&a))
                })
                .expect("non-empty");
            let elected = if best == n { None } else { Some(best) };
            for &c in &candidates {
                votes[c] = 0;
            }
            candidates.clear();

            if elected != parent[u] {
                parent[u] = elected;
                depth[u] = 0;
                pinned[u] = Some(elected.unwrap_or(ROOT));
            }
        }

        // final children with strict comparisons
        for (i, &v) in g.neighbors(u).iter().enumerate() {
            if processed[v] {
                continue;
            }
            let tri = t.at(u, i) as usize;
            let keep = parent[u] == parent[v]
                || (edge_pc(i, v, &pinned) < parent_pc(v, &parent, &pinned) && depth[v] < tri + 1);
            if keep {
                parent[v] = Some(u);
                depth[v] += 1;
            }
        }
    }
    SkeletonForest::from_parents(parent).expect("children only attach to processed nodes")
}
