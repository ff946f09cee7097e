//! Edge edits and the `+ u v` / `- u v` edit-list format.

use std::fmt;
use std::io::BufRead;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forest::SkeletonForest;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EditKind {
    Delete,
    Insert,
}

/// A single edge insertion or deletion; endpoints are stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Edit {
    pub kind: EditKind,
    pub u: usize,
    pub v: usize,
}

impl Edit {
    pub fn new(kind: EditKind, a: usize, b: usize) -> Self {
        Edit {
            kind,
            u: a.min(b),
            v: a.max(b),
        }
    }

    pub fn insert(a: usize, b: usize) -> Self {
        Self::new(EditKind::Insert, a, b)
    }

    pub fn delete(a: usize, b: usize) -> Self {
        Self::new(EditKind::Delete, a, b)
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    /// Whether the edit can be applied to `g` as it is now.
    pub fn applicable(&self, g: &Graph) -> bool {
        self.u != self.v
            && self.v < g.node_count()
            && match self.kind {
                EditKind::Insert => !g.has_edge(self.u, self.v),
                EditKind::Delete => g.has_edge(self.u, self.v),
            }
    }

    pub fn apply(&self, g: &mut Graph) -> Result<()> {
        if !self.applicable(g) {
            return Err(Error::EditNotApplicable(self.to_string()));
        }
        match self.kind {
            EditKind::Insert => g.add_edge(self.u, self.v),
            EditKind::Delete => g.remove_edge(self.u, self.v),
        };
        Ok(())
    }

    /// Undoes a previously applied edit.
    pub fn revert(&self, g: &mut Graph) {
        match self.kind {
            EditKind::Insert => g.remove_edge(self.u, self.v),
            EditKind::Delete => g.add_edge(self.u, self.v),
        };
    }
}

impl fmt::Display for Edit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.kind {
            EditKind::Insert => '+',
            EditKind::Delete => '-',
        };
        write!(f, "{sign} {} {}", self.u, self.v)
    }
}

/// Ordered list of edits; `k` is its length.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EditSet {
    pub edits: Vec<Edit>,
}

impl EditSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.edits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edits.is_empty()
    }

    pub fn push(&mut self, e: Edit) {
        self.edits.push(e);
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Edit> {
        self.edits.iter()
    }

    pub fn to_text(&self) -> String {
        self.edits.iter().map(|e| format!("{e}\n")).collect()
    }

    pub fn read_text<R: BufRead>(reader: R) -> Result<Self> {
        let mut edits = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: idx + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [sign, a, b] = fields[..] else {
                return Err(err(format!("expected `+|- u v`, found {line:?}")));
            };
            let kind = match sign {
                "+" => EditKind::Insert,
                "-" => EditKind::Delete,
                other => return Err(err(format!("unknown edit sign {other:?}"))),
            };
            let a: usize = a
                .parse()
                .map_err(|_| err(format!("invalid node id {a:?}")))?;
            let b: usize = b
                .parse()
                .map_err(|_| err(format!("invalid node id {b:?}")))?;
            edits.push(Edit::new(kind, a, b));
        }
        Ok(EditSet { edits })
    }

    /// The edits turning `g` into the closure of `f`, inserts first, each
    /// group in ascending pair order. The closure is streamed node by node.
    pub fn from_forest(g: &Graph, f: &SkeletonForest) -> Result<Self> {
        if f.node_count() != g.node_count() {
            return Err(Error::InvalidForest("forest and graph sizes differ".into()));
        }
        let (pre, post) = f.intervals();
        let mut edits = Vec::new();
        let mut ancestors = Vec::new();
        for v in g.nodes() {
            ancestors.clear();
            ancestors.extend(f.ancestors(v));
            ancestors.sort_unstable();
            for &a in &ancestors {
                if !g.has_edge(a, v) {
                    edits.push(Edit::insert(a, v));
                }
            }
        }
        for (u, v) in g.edges() {
            let related =
                (pre[u] < pre[v] && post[v] < post[u]) || (pre[v] < pre[u] && post[u] < post[v]);
            if !related {
                edits.push(Edit::delete(u, v));
            }
        }
        edits.sort_unstable_by_key(|e| (e.kind == EditKind::Delete, e.u, e.v));
        Ok(EditSet { edits })
    }
}

impl FromIterator<Edit> for EditSet {
    fn from_iter<I: IntoIterator<Item = Edit>>(iter: I) -> Self {
        EditSet {
            edits: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a EditSet {
    type Item = &'a Edit;
    type IntoIter = std::slice::Iter<'a, Edit>;

    fn into_iter(self) -> Self::IntoIter {
        self.edits.iter()
    }
}

/// Applies the edits in order to a copy of `g`. Fails on the first edit that
/// does not apply, or if a pair is edited twice.
pub fn apply_edits(g: &Graph, edits: &EditSet) -> Result<Graph> {
    let mut out = g.clone();
    let mut seen = std::collections::HashSet::new();
    for e in edits {
        if !seen.insert(e.pair()) {
            return Err(Error::EditNotApplicable(format!("{e} (pair edited twice)")));
        }
        e.apply(&mut out)?;
    }
    Ok(out)
}
