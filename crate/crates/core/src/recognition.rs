//! Linear-time certifying quasi-threshold recognition.
//!
//! Nodes are processed by decreasing degree. Every processed node claims its
//! unprocessed neighbors as children, which is only consistent if they share
//! its current parent. A mismatch yields an induced P4 or C4.

use std::fmt;

use serde::Serialize;

use crate::forest::SkeletonForest;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ForbiddenKind {
    P4,
    C4,
}

/// Four nodes `(a, b, c, d)` along an induced path (`P4`) or cycle (`C4`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Certificate {
    pub kind: ForbiddenKind,
    pub nodes: [usize; 4],
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.nodes;
        write!(f, "{:?} {a} {b} {c} {d}", self.kind)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recognition {
    QuasiThreshold(SkeletonForest),
    Forbidden(Certificate),
}

impl Recognition {
    pub fn is_quasi_threshold(&self) -> bool {
        matches!(self, Recognition::QuasiThreshold(_))
    }
}

/// Node ids sorted by decreasing degree, ties by ascending id (bucket sort).
pub(crate) fn degree_order_desc(g: &Graph) -> Vec<usize> {
    let max_deg = g.max_degree();
    let mut start = vec![0usize; max_deg + 2];
    for u in g.nodes() {
        start[max_deg - g.degree(u) + 1] += 1;
    }
    for i in 1..start.len() {
        start[i] += start[i - 1];
    }
    let mut order = vec![0; g.node_count()];
    for u in g.nodes() {
        let bucket = max_deg - g.degree(u);
        order[start[bucket]] = u;
        start[bucket] += 1;
    }
    order
}

pub fn recognize(g: &Graph) -> Recognition {
    let n = g.node_count();
    const UNPROCESSED: usize = usize::MAX;
    let order = degree_order_desc(g);
    let mut parent: Vec<Option<usize>> = vec![None; n];
    // position in processing order; the virtual root counts as processed first
    let mut rank = vec![UNPROCESSED; n];

    for (i, &u) in order.iter().enumerate() {
        rank[u] = i;
        for &v in g.neighbors(u) {
            if rank[v] != UNPROCESSED {
                continue;
            }
            if parent[u] != parent[v] {
                return Recognition::Forbidden(certificate(g, &parent, &rank, u, v));
            }
            parent[v] = Some(u);
        }
    }
    let forest = SkeletonForest::from_parents(parent).expect("recognition builds a forest");
    Recognition::QuasiThreshold(forest)
}

/// Builds the witness for a conflict between `u` (being processed) and its
/// unprocessed neighbor `v`. With `t` the endpoint whose parent was processed
/// later and `s` the other, the chain `s - t - p(t) - x` is induced, where `x`
/// is a neighbor of `p(t)` outside `N[t]`.
fn certificate(
    g: &Graph,
    parent: &[Option<usize>],
    rank: &[usize],
    u: usize,
    v: usize,
) -> Certificate {
    let parent_rank = |w: usize| parent[w].map_or(-1, |p| rank[p] as i64);
    let (s, t) = if parent_rank(u) > parent_rank(v) {
        (v, u)
    } else {
        (u, v)
    };
    let pt = parent[t].expect("the later parent is a real node");
    let mut marked = vec![false; g.node_count()];
    for &w in g.neighbors(t) {
        marked[w] = true;
    }
    let x = g
        .neighbors(pt)
        .iter()
        .copied()
        .find(|&w| w != t && !marked[w])
        .expect("degree argument guarantees a private neighbor of the parent");
    let kind = if g.has_edge(s, x) {
        ForbiddenKind::C4
    } else {
        ForbiddenKind::P4
    };
    Certificate {
        kind,
        nodes: [s, t, pt, x],
    }
}

/// True iff the four nodes are distinct and induce exactly the claimed pattern.
pub fn verify_certificate(g: &Graph, c: &Certificate) -> bool {
    let [a, b, x, d] = c.nodes;
    let n = g.node_count();
    if c.nodes.iter().any(|&w| w >= n) {
        return false;
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if c.nodes[i] == c.nodes[j] {
                return false;
            }
        }
    }
    let path = g.has_edge(a, b) && g.has_edge(b, x) && g.has_edge(x, d);
    let chords = g.has_edge(a, x) || g.has_edge(b, d);
    let closing = g.has_edge(a, d);
    path && !chords
        && match c.kind {
            ForbiddenKind::P4 => !closing,
            ForbiddenKind::C4 => closing,
        }
}
