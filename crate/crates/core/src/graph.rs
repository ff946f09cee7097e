//! Undirected simple graphs, the edge-list text format, node permutation and
//! per-edge triangle counting.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng;

/// Undirected simple graph over dense ids `0..n`.
///
/// Every adjacency list is sorted and free of duplicates and self-loops, and
/// `v` appears in `N(u)` iff `u` appears in `N(v)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Edgeless graph on `n` nodes.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge iterator. Self-loops and duplicates are
    /// dropped; the node count grows to cover every endpoint.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                continue;
            }
            let hi = u.max(v);
            if hi >= adj.len() {
                adj.resize(hi + 1, Vec::new());
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut half_degrees = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            half_degrees += list.len();
        }
        Graph {
            adj,
            edge_count: half_degrees / 2,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> std::ops::Range<usize> {
        0..self.adj.len()
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// O(log d) membership test.
    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Position of `v` inside `N(u)`.
    #[inline]
    pub fn slot(&self, u: usize, v: usize) -> Option<usize> {
        self.adj[u].binary_search(&v).ok()
    }

    /// Inserts `{u, v}`; returns false if it was already present or a loop.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        let Err(pos_u) = self.adj[u].binary_search(&v) else {
            return false;
        };
        self.adj[u].insert(pos_u, v);
        let pos_v = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos_v, u);
        self.edge_count += 1;
        true
    }

    /// Removes `{u, v}`; returns false if it was not present.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        let Ok(pos_u) = self.adj[u].binary_search(&v) else {
            return false;
        };
        self.adj[u].remove(pos_u);
        let pos_v = self.adj[v].binary_search(&u).expect("asymmetric adjacency");
        self.adj[v].remove(pos_v);
        self.edge_count -= 1;
        true
    }

    /// All edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub(crate) fn check_node(&self, u: usize) -> Result<()> {
        if u < self.node_count() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange(u, self.node_count()))
        }
    }
}

/// Parses the edge-list format from a reader. See [`parse_edge_list`].
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut declared: Option<usize> = None;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        parse_line(&line, idx + 1, &mut edges, &mut declared)?;
    }
    Ok(finish(edges, declared))
}

/// Parses an edge list: one `u v` pair of nonnegative integers per line.
///
/// Lines starting with `#` or `%` are comments, blank lines are ignored. A
/// comment of the form `# nodes N` fixes the node count to at least `N`,
/// otherwise it is `max id + 1`.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    let mut declared: Option<usize> = None;
    for (idx, line) in text.lines().enumerate() {
        parse_line(line, idx + 1, &mut edges, &mut declared)?;
    }
    Ok(finish(edges, declared))
}

fn parse_line(
    line: &str,
    lineno: usize,
    edges: &mut Vec<(usize, usize)>,
    declared: &mut Option<usize>,
) -> Result<()> {
    let line = line.trim();
    if line.is_empty() {
        return Ok(());
    }
    if let Some(comment) = line.strip_prefix('#').or_else(|| line.strip_prefix('%')) {
        let mut words = comment.split_whitespace();
        if words.next() == Some("nodes") {
            if let Some(Ok(n)) = words.next().map(str::parse::<usize>) {
                *declared = Some(declared.unwrap_or(0).max(n));
            }
        }
        return Ok(());
    }
    let mut tokens = line.split_whitespace();
    let mut id = |what: &str| -> Result<usize> {
        let tok = tokens.next().ok_or_else(|| Error::Parse {
            line: lineno,
            message: format!("missing {what} endpoint"),
        })?;
        tok.parse::<usize>().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("invalid node id {tok:?}"),
        })
    };
    let u = id("first")?;
    let v = id("second")?;
    edges.push((u, v));
    Ok(())
}

fn finish(edges: Vec<(usize, usize)>, declared: Option<usize>) -> Graph {
    let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    Graph::from_edges(n.max(declared.unwrap_or(0)), edges)
}

/// Writes `# nodes N` followed by one `u v` line per edge, `u < v`, ascending.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "# nodes {}", g.node_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

pub fn edge_list_string(g: &Graph) -> String {
    let mut s = format!("# nodes {}\n", g.node_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

/// Relabels nodes by a uniformly random permutation drawn from `seed`.
///
/// Returns the permuted graph and `mapping`, where old node `u` becomes
/// `mapping[u]`.
pub fn permute_nodes(g: &Graph, seed: u64) -> (Graph, Vec<usize>) {
    let mut mapping: Vec<usize> = g.nodes().collect();
    mapping.shuffle(&mut rng::seeded(seed));
    let permuted = Graph::from_edges(
        g.node_count(),
        g.edges().map(|(u, v)| (mapping[u], mapping[v])),
    );
    (permuted, mapping)
}

/// Per-edge triangle counts, stored parallel to the adjacency lists so both
/// orientations of an edge hold the same value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleCounts {
    counts: Vec<Vec<u32>>,
}

impl TriangleCounts {
    pub fn get(&self, g: &Graph, u: usize, v: usize) -> Option<u32> {
        g.slot(u, v).map(|i| self.counts[u][i])
    }

    /// Count for the `i`-th neighbor of `u`.
    #[inline]
    pub fn at(&self, u: usize, i: usize) -> u32 {
        self.counts[u][i]
    }

    /// Sum over all edges; three times the number of triangles.
    pub fn total(&self) -> u64 {
        self.counts
            .iter()
            .flatten()
            .map(|&c| u64::from(c))
            .sum::<u64>()
            / 2
    }

    pub(crate) fn slot_mut(&mut self, u: usize, i: usize) -> &mut u32 {
        &mut self.counts[u][i]
    }
}

/// Exact triangle count for every edge.
///
/// Edges are oriented from lower to higher (degree, id) rank; every triangle is
/// then found exactly once from its lowest-ranked corner by marking that
/// corner's out-neighbors.
pub fn count_triangles(g: &Graph) -> TriangleCounts {
    let n = g.node_count();
    let rank_less = |a: usize, b: usize| (g.degree(a), a) < (g.degree(b), b);

    // out[u] = (neighbor, slot of neighbor in N(u))
    let out: Vec<Vec<(usize, usize)>> = g
        .nodes()
        .map(|u| {
            g.neighbors(u)
                .iter()
                .enumerate()
                .filter(|&(_, &v)| rank_less(u, v))
                .map(|(i, &v)| (v, i))
                .collect()
        })
        .collect();

    let mut counts: Vec<Vec<u32>> = g.nodes().map(|u| vec![0; g.degree(u)]).collect();
    const UNMARKED: usize = usize::MAX;
    let mut mark = vec![UNMARKED; n];
    for u in 0..n {
        for &(w, slot) in &out[u] {
            mark[w] = slot;
        }
        for &(v, uv) in &out[u] {
            for &(w, vw) in &out[v] {
                let uw = mark[w];
                if uw != UNMARKED {
                    counts[u][uv] += 1;
                    counts[v][vw] += 1;
                    counts[u][uw] += 1;
                }
            }
        }
        for &(w, _) in &out[u] {
            mark[w] = UNMARKED;
        }
    }
    // mirror the oriented counts onto the reverse slots
    for u in 0..n {
        for &(v, uv) in &out[u] {
            let c = counts[u][uv];
            let vu = g.slot(v, u).expect("asymmetric adjacency");
            counts[v][vu] = c;
        }
    }
    TriangleCounts { counts }
}

/// `(d(x) - 1 - t) * (d(y) - 1 - t)` for the edge `{x, y}`: the number of C4
/// through the edge plus the number of P4 having it as central edge.
pub fn pseudo_counter(g: &Graph, t: &TriangleCounts, x: usize, y: usize) -> Result<u64> {
    g.check_node(x)?;
    g.check_node(y)?;
    let tri = t.get(g, x, y).ok_or(Error::NotAnEdge(x, y))?;
    Ok(pseudo_counter_value(g.degree(x), g.degree(y), tri as usize))
}

#[inline]
pub(crate) fn pseudo_counter_value(dx: usize, dy: usize, tri: usize) -> u64 {
    ((dx - 1 - tri) as u64) * ((dy - 1 - tri) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_triangles(g: &Graph, u: usize, v: usize) -> u32 {
        g.nodes()
            .filter(|&w| w != u && w != v && g.has_edge(u, w) && g.has_edge(v, w))
            .count() as u32
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    #[test]
    fn parses_simple_list() {
        let g = parse_edge_list("0 1\n1 2").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn drops_duplicates_and_loops() {
        let g = parse_edge_list("0 1\n1 0\n0 0").unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn skips_comments_and_keeps_gaps() {
        let g = parse_edge_list("# c\n2 3").unwrap();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.degree(0), 0);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(2, 3)]);
        let g = parse_edge_list("% matrix market style\n\n1 0\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn header_overrides_node_count() {
        let g = parse_edge_list("# nodes 10\n0 1\n").unwrap();
        assert_eq!(g.node_count(), 10);
    }

    #[test]
    fn empty_input_is_empty_graph() {
        let g = parse_edge_list("").unwrap();
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn malformed_token_reports_line() {
        match parse_edge_list("0 1\n1 x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_edge_list("0 1\n\n3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_edge_list("-1 2"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn add_and_remove_keep_lists_sorted() {
        let mut g = Graph::new(5);
        assert!(g.add_edge(3, 1));
        assert!(g.add_edge(1, 0));
        assert!(g.add_edge(4, 1));
        assert!(!g.add_edge(1, 3));
        assert!(!g.add_edge(2, 2));
        assert_eq!(g.neighbors(1), &[0, 3, 4]);
        assert!(g.remove_edge(1, 3));
        assert!(!g.remove_edge(1, 3));
        assert_eq!(g.neighbors(1), &[0, 4]);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn permutation_is_deterministic_and_isomorphic() {
        let g = parse_edge_list("0 1\n1 2\n2 3\n3 0\n0 2\n4 5").unwrap();
        let (a, map_a) = permute_nodes(&g, 42);
        let (b, map_b) = permute_nodes(&g, 42);
        assert_eq!(a, b);
        assert_eq!(map_a, map_b);
        let mut da: Vec<_> = a.nodes().map(|u| a.degree(u)).collect();
        let mut dg: Vec<_> = g.nodes().map(|u| g.degree(u)).collect();
        da.sort_unstable();
        dg.sort_unstable();
        assert_eq!(da, dg);
        for (u, v) in g.edges() {
            assert!(a.has_edge(map_a[u], map_a[v]));
        }
    }

    #[test]
    fn triangle_counts_small_graphs() {
        let k3 = complete(3);
        let t = count_triangles(&k3);
        assert!(k3.edges().all(|(u, v)| t.get(&k3, u, v) == Some(1)));

        let c4 = parse_edge_list("0 1\n1 2\n2 3\n3 0").unwrap();
        let t = count_triangles(&c4);
        assert!(c4.edges().all(|(u, v)| t.get(&c4, u, v) == Some(0)));

        let k4 = complete(4);
        let t = count_triangles(&k4);
        assert!(k4.edges().all(|(u, v)| t.get(&k4, u, v) == Some(2)));
        assert_eq!(t.total(), 12);
    }

    #[test]
    fn pseudo_counter_examples() {
        let k3 = complete(3);
        let t = count_triangles(&k3);
        assert_eq!(pseudo_counter(&k3, &t, 0, 1).unwrap(), 0);

        let p4 = parse_edge_list("0 1\n1 2\n2 3").unwrap();
        let t = count_triangles(&p4);
        assert_eq!(pseudo_counter(&p4, &t, 1, 2).unwrap(), 1);

        let star = parse_edge_list("0 1\n0 2\n0 3").unwrap();
        let t = count_triangles(&star);
        assert_eq!(pseudo_counter(&star, &t, 0, 1).unwrap(), 0);

        assert!(matches!(
            pseudo_counter(&p4, &t, 0, 3),
            Err(Error::NotAnEdge(0, 3))
        ));
        assert!(matches!(
            pseudo_counter(&p4, &t, 0, 9),
            Err(Error::NodeOutOfRange(9, 4))
        ));
    }

    #[test]
    fn triangle_counts_match_triple_loop() {
        for seed in 0..30u64 {
            let n = 5 + (seed as usize % 45);
            let g = crate::testutil::random_graph(n, 0.05 + (seed % 7) as f64 * 0.08, seed);
            let t = count_triangles(&g);
            for (u, v) in g.edges() {
                let c = t.get(&g, u, v).unwrap();
                assert_eq!(c, naive_triangles(&g, u, v), "seed {seed} edge {u}-{v}");
                assert!((c as usize) < g.degree(u).min(g.degree(v)));
            }
        }
    }

    #[test]
    fn pseudo_counter_matches_four_node_scan() {
        use crate::testutil::all_graphs;
        for n in 2..=6 {
            for g in all_graphs(n) {
                let t = count_triangles(&g);
                for (x, y) in g.edges() {
                    // brute force: pairs (a in N(x), b in N(y)) forming a C4 through {x,y}
                    // or a P4 with {x,y} central
                    let mut count = 0u64;
                    for a in g.nodes() {
                        for b in g.nodes() {
                            let distinct = a != b && a != x && a != y && b != x && b != y;
                            if distinct
                                && g.has_edge(a, x)
                                && g.has_edge(b, y)
                                && !g.has_edge(a, y)
                                && !g.has_edge(b, x)
                            {
                                count += 1;
                            }
                        }
                    }
                    assert_eq!(pseudo_counter(&g, &t, x, y).unwrap(), count);
                }
            }
        }
    }
}
