//! Greedy editing baseline: repeatedly apply the single edit that destroys
//! the most induced P4 and C4, optionally refining the tail of the edit
//! sequence with the bounded search tree.

use serde::Serialize;

use crate::edit::{Edit, EditKind, EditSet};
use crate::error::{Error, Result};
use crate::exact::bst_solve;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SubgraphCounts {
    pub p4: u64,
    pub c4: u64,
}

impl SubgraphCounts {
    pub fn total(&self) -> u64 {
        self.p4 + self.c4
    }
}

/// Induced P4 and C4 counts. Per edge `{u, v}`, with `A = N(u) \ N[v]` and
/// `B = N(v) \ N[u]`, the edge lies on `|A->B adjacencies|` C4 and is the
/// central edge of `|A|·|B| - that` P4. Every C4 is seen from its four edges.
pub fn count_p4_c4(g: &Graph) -> SubgraphCounts {
    let n = g.node_count();
    let mut in_a = vec![false; n];
    let mut in_b = vec![false; n];
    let mut p4 = 0u64;
    let mut c4_edge_sum = 0u64;
    for (u, v) in g.edges() {
        for &x in g.neighbors(u) {
            in_a[x] = true;
        }
        for &y in g.neighbors(v) {
            in_b[y] = true;
        }
        let excl_a: Vec<usize> = g
            .neighbors(u)
            .iter()
            .copied()
            .filter(|&x| x != v && !in_b[x])
            .collect();
        let excl_b_len = g
            .neighbors(v)
            .iter()
            .filter(|&&y| y != u && !in_a[y])
            .count() as u64;
        let mut c4 = 0u64;
        for &x in &excl_a {
            c4 += g
                .neighbors(x)
                .iter()
                .filter(|&&y| y != u && in_b[y] && !in_a[y])
                .count() as u64;
        }
        p4 += excl_a.len() as u64 * excl_b_len - c4;
        c4_edge_sum += c4;
        for &x in g.neighbors(u) {
            in_a[x] = false;
        }
        for &y in g.neighbors(v) {
            in_b[y] = false;
        }
    }
    SubgraphCounts {
        p4,
        c4: c4_edge_sum / 4,
    }
}

/// Class of a node relative to the edited pair `{u, v}`.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Common = 0,
    OnlyU = 1,
    OnlyV = 2,
    Neither = 3,
}

const SIDES: [Side; 4] = [Side::Common, Side::OnlyU, Side::OnlyV, Side::Neither];

/// Shape of the subgraph induced by `{u, v, a, b}`, given the classes of
/// `a` and `b`, the edge `ab` and the edge `uv`. 1 = P4, 2 = C4, 0 = neither.
fn shape(sa: Side, sb: Side, ab: bool, uv: bool) -> u8 {
    let adj_u = |s: Side| matches!(s, Side::Common | Side::OnlyU);
    let adj_v = |s: Side| matches!(s, Side::Common | Side::OnlyV);
    // nodes: 0 = u, 1 = v, 2 = a, 3 = b
    let edges = [
        (0, 1, uv),
        (0, 2, adj_u(sa)),
        (0, 3, adj_u(sb)),
        (1, 2, adj_v(sa)),
        (1, 3, adj_v(sb)),
        (2, 3, ab),
    ];
    let mut deg = [0u8; 4];
    let mut m = 0;
    for &(x, y, present) in &edges {
        if present {
            deg[x] += 1;
            deg[y] += 1;
            m += 1;
        }
    }
    let mut sorted = deg;
    sorted.sort_unstable();
    // three edges with degrees 1,1,2,2 are connected, hence a path
    if m == 3 && sorted == [1, 1, 2, 2] {
        1
    } else if m == 4 && sorted == [2, 2, 2, 2] {
        2
    } else {
        0
    }
}

/// Change in (P4, C4) counts caused by applying `edit`. Only 4-sets holding
/// both endpoints change; they are tallied by the classes of the other two
/// nodes, in time linear in the adjacency of the endpoints' neighbors.
pub fn delta_p4_c4(g: &Graph, edit: &Edit) -> Result<(i64, i64)> {
    if !edit.applicable(g) {
        return Err(Error::EditNotApplicable(edit.to_string()));
    }
    let (u, v) = edit.pair();
    let n = g.node_count();
    let mut side = vec![Side::Neither; n];
    let mut group: [Vec<usize>; 3] = Default::default();
    for &x in g.neighbors(u) {
        if x != v {
            side[x] = Side::OnlyU;
        }
    }
    for &y in g.neighbors(v) {
        if y == u {
            continue;
        }
        side[y] = if side[y] == Side::OnlyU {
            Side::Common
        } else {
            Side::OnlyV
        };
    }
    // common neighbors are collected from u's list only
    for &x in g.neighbors(u) {
        if x != v {
            group[side[x] as usize].push(x);
        }
    }
    for &y in g.neighbors(v) {
        if y != u && side[y] == Side::OnlyV {
            group[Side::OnlyV as usize].push(y);
        }
    }
    // adjacency tallies between classes; edges inside the marked classes are
    // seen from both ends
    let mut adjacent = [[0u64; 4]; 4];
    for (s, members) in group.iter().enumerate() {
        for &x in members {
            for &y in g.neighbors(x) {
                if y == u || y == v {
                    continue;
                }
                adjacent[s][side[y] as usize] += 1;
            }
        }
    }
    let sizes = [
        group[0].len() as u64,
        group[1].len() as u64,
        group[2].len() as u64,
        (n - 2 - group[0].len() - group[1].len() - group[2].len()) as u64,
    ];
    let before = g.has_edge(u, v);
    let after = edit.kind == EditKind::Insert;
    let (mut dp, mut dc) = (0i64, 0i64);
    for i in 0..3 {
        for j in i..4 {
            let (with_edge, pairs) = if i == j {
                (
                    adjacent[i][i] / 2,
                    sizes[i] * (sizes[i].saturating_sub(1)) / 2,
                )
            } else {
                (adjacent[i][j], sizes[i] * sizes[j])
            };
            let without_edge = pairs - with_edge;
            for (ab, count) in [(true, with_edge), (false, without_edge)] {
                if count == 0 {
                    continue;
                }
                let old = shape(SIDES[i], SIDES[j], ab, before);
                let new = shape(SIDES[i], SIDES[j], ab, after);
                let c = count as i64;
                dp += c * ((new == 1) as i64 - (old == 1) as i64);
                dc += c * ((new == 2) as i64 - (old == 2) as i64);
            }
        }
    }
    Ok((dp, dc))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NgOptions {
    pub revert_depth: usize,
    pub use_bst: bool,
    /// Never edit the same pair twice.
    pub freeze_edited: bool,
}

impl Default for NgOptions {
    fn default() -> Self {
        NgOptions {
            revert_depth: 10,
            use_bst: true,
            freeze_edited: false,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct NgResult {
    pub edits: EditSet,
    /// P4 + C4 count before each greedy step and after the last one.
    pub trace: Vec<u64>,
    pub greedy_len: usize,
    pub candidates_evaluated: u64,
    pub bst_rounds: usize,
    /// Steps taken in deletion-only mode after no edit lowered the count.
    pub fallback_steps: usize,
}

/// Greedy best-edit loop followed by optional search-tree refinement.
///
/// Each step evaluates every node pair and applies the edit with the most
/// negative change in P4 + C4. Ties go to deletions, then to the smallest
/// pair. If no edit lowers the count, the loop switches to deletions only,
/// which still ends at a quasi-threshold graph (frozen pairs are released
/// in that mode). The reported edits are the net change against `g`.
pub fn ng_greedy(g: &Graph, opts: NgOptions) -> NgResult {
    let n = g.node_count();
    let mut work = g.clone();
    let mut result = NgResult::default();
    let mut counts = count_p4_c4(&work);
    let mut edited = std::collections::HashSet::new();
    let mut deletions_only = false;
    result.trace.push(counts.total());
    let mut edits = Vec::new();

    while counts.total() > 0 {
        let mut best: Option<(i64, Edit, (i64, i64))> = None;
        for u in 0..n {
            for v in u + 1..n {
                let kind = if work.has_edge(u, v) {
                    EditKind::Delete
                } else {
                    EditKind::Insert
                };
                if deletions_only && kind == EditKind::Insert {
                    continue;
                }
                if opts.freeze_edited && !deletions_only && edited.contains(&(u, v)) {
                    continue;
                }
                let e = Edit::new(kind, u, v);
                let d = delta_p4_c4(&work, &e).expect("edit chosen to be applicable");
                result.candidates_evaluated += 1;
                let score = d.0 + d.1;
                let better = match &best {
                    None => true,
                    Some((s, b, _)) => score < *s || (score == *s && e < *b),
                };
                if better {
                    best = Some((score, e, d));
                }
            }
        }
        let Some((score, e, d)) = best else { break };
        if score >= 0 && !deletions_only {
            deletions_only = true;
            continue;
        }
        if deletions_only {
            result.fallback_steps += 1;
        }
        e.apply(&mut work).expect("applicable");
        edited.insert(e.pair());
        edits.push(e);
        counts.p4 = (counts.p4 as i64 + d.0) as u64;
        counts.c4 = (counts.c4 as i64 + d.1) as u64;
        result.trace.push(counts.total());
    }
    result.greedy_len = edits.len();

    if opts.use_bst && opts.revert_depth > 0 {
        loop {
            let k = edits.len();
            let tail = opts.revert_depth.min(k);
            if tail == 0 {
                break;
            }
            let mut base = g.clone();
            for e in &edits[..k - tail] {
                e.apply(&mut base).expect("prefix of a valid sequence");
            }
            result.bst_rounds += 1;
            match bst_solve(&base, tail - 1) {
                Some(better) if better.len() < tail => {
                    edits.truncate(k - tail);
                    edits.extend(better.edits);
                }
                _ => break,
            }
        }
    }
    result.edits = net_edits(g, &edits);
    result
}

/// Collapses a sequence that may touch a pair more than once into the net
/// change against `g`, in order of first appearance.
fn net_edits(g: &Graph, seq: &[Edit]) -> EditSet {
    let mut flips: std::collections::HashMap<(usize, usize), usize> = Default::default();
    for e in seq {
        *flips.entry(e.pair()).or_default() += 1;
    }
    let mut seen = std::collections::HashSet::new();
    seq.iter()
        .filter(|e| flips[&e.pair()] % 2 == 1 && seen.insert(e.pair()))
        .map(|e| {
            let kind = if g.has_edge(e.u, e.v) {
                EditKind::Delete
            } else {
                EditKind::Insert
            };
            Edit::new(kind, e.u, e.v)
        })
        .collect()
}
