//! Rooted skeleton forests and their transitive closures.
//!
//! A forest stands for the quasi-threshold graph in which two nodes are
//! adjacent iff one is a proper ancestor of the other. Roots hang below an
//! implicit virtual root, represented by a `None` parent.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonForest {
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
}

impl SkeletonForest {
    /// Forest in which every node is a root; its closure is edgeless.
    pub fn all_roots(n: usize) -> Self {
        SkeletonForest {
            parent: vec![None; n],
            depth: vec![0; n],
        }
    }

    /// Validates a parent map and derives depths. Fails on out-of-range
    /// parents, self-parents and cycles.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        for (u, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(Error::NodeOutOfRange(p, n));
                }
                if p == u {
                    return Err(Error::CyclicForest(u));
                }
            }
        }
        const UNKNOWN: usize = usize::MAX;
        const ON_PATH: usize = usize::MAX - 1;
        let mut depth = vec![UNKNOWN; n];
        let mut path = Vec::new();
        for start in 0..n {
            if depth[start] != UNKNOWN {
                continue;
            }
            let mut u = start;
            // climb until a node with known depth or a root
            let base = loop {
                if depth[u] == ON_PATH {
                    return Err(Error::CyclicForest(u));
                }
                if depth[u] != UNKNOWN {
                    break depth[u] + 1;
                }
                depth[u] = ON_PATH;
                path.push(u);
                match parent[u] {
                    Some(p) => u = p,
                    None => break 0,
                }
            };
            for (i, &w) in path.iter().rev().enumerate() {
                depth[w] = base + i;
            }
            path.clear();
        }
        Ok(SkeletonForest { parent, depth })
    }

    /// Builds from parents and checks the supplied depths against them.
    pub fn from_parts(parent: Vec<Option<usize>>, depth: Vec<usize>) -> Result<Self> {
        if parent.len() != depth.len() {
            return Err(Error::InvalidForest(
                "parent and depth lengths differ".into(),
            ));
        }
        let f = Self::from_parents(parent)?;
        if let Some(u) = (0..depth.len()).find(|&u| f.depth[u] != depth[u]) {
            return Err(Error::InconsistentDepth(u));
        }
        Ok(f)
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    pub fn parent(&self, u: usize) -> Option<usize> {
        self.parent[u]
    }

    #[inline]
    pub fn depth(&self, u: usize) -> usize {
        self.depth[u]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn depths(&self) -> &[usize] {
        &self.depth
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.parent.len()).filter(|&u| self.parent[u].is_none())
    }

    /// Number of ancestor/descendant pairs, i.e. edges of the closure.
    pub fn closure_size(&self) -> usize {
        self.depth.iter().sum()
    }

    pub fn ancestors(&self, u: usize) -> Ancestors<'_> {
        Ancestors {
            forest: self,
            next: self.parent[u],
        }
    }

    /// Children lists, each in ascending node order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.node_count()];
        for (u, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(u);
            }
        }
        children
    }

    /// Pre/post-order stamps: `a` is an ancestor of `b` iff
    /// `pre[a] < pre[b] && post[b] < post[a]`.
    pub(crate) fn intervals(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.node_count();
        let children = self.children();
        let mut pre = vec![0; n];
        let mut post = vec![0; n];
        let mut clock = 0;
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for root in self.roots() {
            pre[root] = clock;
            clock += 1;
            stack.push((root, 0));
            while let Some(top) = stack.last_mut() {
                let u = top.0;
                if let Some(&c) = children[u].get(top.1) {
                    top.1 += 1;
                    pre[c] = clock;
                    clock += 1;
                    stack.push((c, 0));
                } else {
                    post[u] = clock;
                    clock += 1;
                    stack.pop();
                }
            }
        }
        (pre, post)
    }

    /// Writes one `node parent depth` line per node, `-1` for roots.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.to_text().as_bytes())?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for u in 0..self.node_count() {
            match self.parent[u] {
                Some(p) => writeln!(s, "{u} {p} {}", self.depth[u]),
                None => writeln!(s, "{u} -1 {}", self.depth[u]),
            }
            .expect("writing to a String");
        }
        s
    }

    /// Reads the `node parent depth` format. Nodes may appear in any order
    /// but must cover `0..n` exactly once; depths are checked.
    pub fn read_text<R: BufRead>(reader: R) -> Result<Self> {
        let mut rows: Vec<(usize, Option<usize>, usize)> = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: idx + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(err(format!("expected 3 fields, found {}", fields.len())));
            }
            let node: usize = fields[0]
                .parse()
                .map_err(|_| err(format!("invalid node {:?}", fields[0])))?;
            let parent: i64 = fields[1]
                .parse()
                .map_err(|_| err(format!("invalid parent {:?}", fields[1])))?;
            let depth: usize = fields[2]
                .parse()
                .map_err(|_| err(format!("invalid depth {:?}", fields[2])))?;
            let parent = match parent {
                -1 => None,
                p if p >= 0 => Some(p as usize),
                p => return Err(err(format!("invalid parent {p}"))),
            };
            rows.push((node, parent, depth));
        }
        let n = rows.len();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        for (node, p, d) in rows {
            if node >= n || seen[node] {
                return Err(Error::InvalidForest(format!(
                    "node {node} missing or repeated"
                )));
            }
            seen[node] = true;
            parent[node] = p;
            depth[node] = d;
        }
        Self::from_parts(parent, depth)
    }
}

pub struct Ancestors<'a> {
    forest: &'a SkeletonForest,
    next: Option<usize>,
}

impl Iterator for Ancestors<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let u = self.next?;
        self.next = self.forest.parent[u];
        Some(u)
    }
}

/// The quasi-threshold graph a forest stands for: `{u, v}` is an edge iff one
/// is a proper ancestor of the other.
pub fn closure_of_forest(f: &SkeletonForest) -> Graph {
    let edges = (0..f.node_count()).flat_map(|v| f.ancestors(v).map(move |a| (a, v)));
    Graph::from_edges(f.node_count(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_roots_closure_is_empty() {
        let f = SkeletonForest::all_roots(5);
        let g = closure_of_forest(&f);
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn star_closure() {
        let f = SkeletonForest::from_parents(vec![None, Some(0), Some(0), Some(0)]).unwrap();
        let g = closure_of_forest(&f);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn chain_closure_is_clique() {
        let f = SkeletonForest::from_parents(vec![None, Some(0), Some(1)]).unwrap();
        assert_eq!(f.depths(), &[0, 1, 2]);
        let g = closure_of_forest(&f);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(f.closure_size(), 3);
    }

    #[test]
    fn cycles_are_rejected() {
        assert!(matches!(
            SkeletonForest::from_parents(vec![Some(1), Some(2), Some(0)]),
            Err(Error::CyclicForest(_))
        ));
        assert!(matches!(
            SkeletonForest::from_parents(vec![Some(0)]),
            Err(Error::CyclicForest(0))
        ));
        assert!(matches!(
            SkeletonForest::from_parents(vec![None, Some(7)]),
            Err(Error::NodeOutOfRange(7, 2))
        ));
        // a tail leading into a cycle
        assert!(matches!(
            SkeletonForest::from_parents(vec![Some(1), Some(2), Some(1)]),
            Err(Error::CyclicForest(_))
        ));
    }

    #[test]
    fn depth_mismatch_is_reported() {
        assert!(matches!(
            SkeletonForest::from_parts(vec![None, Some(0)], vec![0, 2]),
            Err(Error::InconsistentDepth(1))
        ));
    }

    #[test]
    fn text_round_trip() {
        let f = SkeletonForest::from_parents(vec![Some(2), None, Some(1), Some(2), None]).unwrap();
        let text = f.to_text();
        assert!(text.starts_with("0 2 2\n1 -1 0\n"));
        let back = SkeletonForest::read_text(text.as_bytes()).unwrap();
        assert_eq!(back, f);
        assert!(SkeletonForest::read_text("0 -1 0\n0 -1 0\n".as_bytes()).is_err());
        assert!(SkeletonForest::read_text("0 -2 0\n".as_bytes()).is_err());
    }

    #[test]
    fn intervals_encode_ancestry() {
        let f = SkeletonForest::from_parents(vec![None, Some(0), Some(1), Some(0), None, Some(4)])
            .unwrap();
        let (pre, post) = f.intervals();
        for a in 0..6 {
            for b in 0..6 {
                let by_walk = f.ancestors(b).any(|x| x == a);
                let by_stamp = pre[a] < pre[b] && post[b] < post[a];
                assert_eq!(by_walk, by_stamp, "{a} {b}");
            }
        }
    }
}
