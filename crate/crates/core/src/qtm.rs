//! The Quasi-Threshold Mover: round-based local moving on a skeleton forest.
//!
//! A move takes one node `v_m` out of the forest and reinserts it below the
//! parent, and with the set of adopted children, that saves the most edits.
//! The search only touches `v_m`'s neighbors and O(d(v_m)) further nodes: it
//! walks the forest bottom-up in a depth-ordered queue, accumulating
//!
//! * `child_close(u)`: neighbors minus non-neighbors of `v_m` in the subtree
//!   of `u` (cut off at -1 by a resumable, bounded DFS), and
//! * `score_max(u)`: the best saving over all parents inside `u`'s subtree.
//!
//! The virtual root is node index `n` in the internal arrays.

use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forest::SkeletonForest;
use crate::graph::{count_triangles, Graph};
use crate::init::{count_edits, initial_skeleton};
use crate::rng;

const NONE: usize = usize::MAX;

/// Outcome of the placement search for one node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MoveDecision {
    /// `None` places the node below the virtual root.
    pub new_parent: Option<usize>,
    pub adopted: Vec<usize>,
    /// Edits saved compared to isolating the node.
    pub savings: i64,
}

impl MoveDecision {
    fn isolation() -> Self {
        MoveDecision {
            new_parent: None,
            adopted: Vec::new(),
            savings: 0,
        }
    }
}

/// Where a node sat before it was isolated, and the edits that position saved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Position {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub savings: i64,
}

/// Per-move working state. Every field is back at its initial value between
/// moves; only nodes recorded in `touched_log` are ever dirtied.
#[derive(Clone, Debug)]
pub struct MoveScratch {
    child_close: Vec<i64>,
    score_max: Vec<i64>,
    best_parent: Vec<usize>,
    dfs_cursor: Vec<usize>,
    touched: Vec<bool>,
    in_queue: Vec<bool>,
    neighbor_mark: Vec<bool>,
    queue: BinaryHeap<(usize, usize)>,
    touched_log: Vec<usize>,
}

impl MoveScratch {
    fn new(slots: usize) -> Self {
        MoveScratch {
            child_close: vec![0; slots],
            score_max: vec![-1; slots],
            best_parent: vec![NONE; slots],
            dfs_cursor: vec![NONE; slots],
            touched: vec![false; slots],
            in_queue: vec![false; slots],
            neighbor_mark: vec![false; slots],
            queue: BinaryHeap::new(),
            touched_log: Vec::new(),
        }
    }

    fn reset_slot(&mut self, u: usize) {
        self.child_close[u] = 0;
        self.score_max[u] = -1;
        self.best_parent[u] = NONE;
        self.dfs_cursor[u] = NONE;
        self.touched[u] = false;
        self.in_queue[u] = false;
    }

    /// Full scan; true iff every slot holds its initial value.
    pub fn is_clean(&self) -> bool {
        self.queue.is_empty()
            && self.touched_log.is_empty()
            && self.child_close.iter().all(|&x| x == 0)
            && self.score_max.iter().all(|&x| x == -1)
            && self.best_parent.iter().all(|&x| x == NONE)
            && self.dfs_cursor.iter().all(|&x| x == NONE)
            && !self.touched.iter().any(|&x| x)
            && !self.in_queue.iter().any(|&x| x)
            && !self.neighbor_mark.iter().any(|&x| x)
    }
}

/// Operation counters, standing in for the amortized running-time argument.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct MoveStats {
    pub moves: u64,
    pub applied: u64,
    pub queue_pushes: u64,
    pub degree_sum: u64,
    /// Largest `pushes / d(v_m)` seen in a single move.
    pub max_pushes_per_degree: f64,
}

/// A skeleton forest under local moving, with incremental edit count.
#[derive(Clone, Debug)]
pub struct Mover<'g> {
    g: &'g Graph,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    child_pos: Vec<usize>,
    depth: Vec<usize>,
    scratch: MoveScratch,
    edits: i64,
    stats: MoveStats,
}

impl<'g> Mover<'g> {
    pub fn new(g: &'g Graph, forest: &SkeletonForest) -> Result<Self> {
        let n = g.node_count();
        let edits = count_edits(g, forest)? as i64;
        let mut mover = Mover {
            g,
            parent: vec![n; n],
            children: vec![Vec::new(); n + 1],
            child_pos: vec![0; n],
            depth: forest.depths().to_vec(),
            scratch: MoveScratch::new(n + 1),
            edits,
            stats: MoveStats::default(),
        };
        for u in 0..n {
            mover.attach(u, forest.parent(u).unwrap_or(n));
        }
        Ok(mover)
    }

    fn root(&self) -> usize {
        self.g.node_count()
    }

    pub fn edits(&self) -> usize {
        self.edits as usize
    }

    pub fn stats(&self) -> MoveStats {
        self.stats
    }

    pub fn scratch(&self) -> &MoveScratch {
        &self.scratch
    }

    /// Forest view while `v` is detached between [`Mover::isolate`] and
    /// [`Mover::apply_move`]; `v` shows up as a root without children.
    pub fn forest_with_detached(&self, v: usize) -> SkeletonForest {
        let r = self.root();
        let parents = self
            .parent
            .iter()
            .enumerate()
            .map(|(u, &p)| if u == v || p == r { None } else { Some(p) })
            .collect();
        SkeletonForest::from_parents(parents).expect("mover keeps an acyclic forest")
    }

    pub fn forest(&self) -> SkeletonForest {
        let r = self.root();
        let parents = self
            .parent
            .iter()
            .map(|&p| (p != r && p != NONE).then_some(p))
            .collect();
        SkeletonForest::from_parts(parents, self.depth.clone())
            .expect("mover keeps parents acyclic and depths consistent")
    }

    fn attach(&mut self, u: usize, p: usize) {
        self.parent[u] = p;
        self.child_pos[u] = self.children[p].len();
        self.children[p].push(u);
    }

    fn detach(&mut self, u: usize) {
        let p = self.parent[u];
        let pos = self.child_pos[u];
        self.children[p].swap_remove(pos);
        if let Some(&moved) = self.children[p].get(pos) {
            self.child_pos[moved] = pos;
        }
        self.parent[u] = NONE;
    }

    fn shift_subtree_depth(&mut self, top: usize, up: bool) {
        let mut stack = vec![top];
        while let Some(x) = stack.pop() {
            if up {
                self.depth[x] += 1;
            } else {
                self.depth[x] -= 1;
            }
            stack.extend_from_slice(&self.children[x]);
        }
    }

    fn opt_parent(&self, p: usize) -> Option<usize> {
        (p != self.root()).then_some(p)
    }

    /// Takes `v` out of the forest. Its children move up to its old parent.
    /// Returns the old position together with the edits it saved compared to
    /// isolation (neighbors minus non-neighbors among ancestors and
    /// descendants).
    pub fn isolate(&mut self, v: usize) -> Result<Position> {
        self.g.check_node(v)?;
        if self.parent[v] == NONE {
            return Err(Error::ContractViolation(format!(
                "node {v} is already detached"
            )));
        }
        let g = self.g;
        let r = self.root();
        let marks = &mut self.scratch.neighbor_mark;
        for &x in g.neighbors(v) {
            marks[x] = true;
        }
        let mut savings = 0i64;
        let mut a = self.parent[v];
        while a != r {
            savings += if marks[a] { 1 } else { -1 };
            a = self.parent[a];
        }
        let mut stack: Vec<usize> = self.children[v].clone();
        while let Some(x) = stack.pop() {
            savings += if marks[x] { 1 } else { -1 };
            stack.extend_from_slice(&self.children[x]);
        }
        for &x in g.neighbors(v) {
            marks[x] = false;
        }

        let old_parent = self.parent[v];
        let children = std::mem::take(&mut self.children[v]);
        self.detach(v);
        for &c in &children {
            self.attach(c, old_parent);
            self.shift_subtree_depth(c, false);
        }
        Ok(Position {
            parent: self.opt_parent(old_parent),
            children,
            savings,
        })
    }

    fn push(&mut self, u: usize) {
        let s = &mut self.scratch;
        if s.in_queue[u] {
            return;
        }
        debug_assert!(!s.touched[u], "node {u} re-queued after processing");
        s.in_queue[u] = true;
        s.touched_log.push(u);
        s.queue.push((self.depth[u], u));
        self.stats.queue_pushes += 1;
    }

    /// Next node after `x` in preorder, staying strictly inside the subtree of
    /// `top`; returns `top` when the subtree is exhausted.
    fn next_preorder(&self, x: usize, top: usize) -> usize {
        match self.children[x].first() {
            Some(&c) => c,
            None => self.next_after_subtree(x, top),
        }
    }

    fn next_after_subtree(&self, mut x: usize, top: usize) -> usize {
        while x != top {
            let p = self.parent[x];
            if let Some(&sib) = self.children[p].get(self.child_pos[x] + 1) {
                return sib;
            }
            x = p;
        }
        top
    }

    /// Finds the optimal parent and adopted children for the detached node
    /// `v`. The returned savings are relative to isolation and never negative.
    pub fn try_move(&mut self, v: usize) -> Result<MoveDecision> {
        self.g.check_node(v)?;
        if self.parent[v] != NONE {
            return Err(Error::ContractViolation(format!(
                "node {v} must be isolated first"
            )));
        }
        let g = self.g;
        let r = self.root();
        let pushes_before = self.stats.queue_pushes;

        for &x in g.neighbors(v) {
            self.scratch.neighbor_mark[x] = true;
        }
        for &x in g.neighbors(v) {
            self.push(x);
        }

        let mut failure = None;
        while let Some((_, u)) = self.scratch.queue.pop() {
            let s = &mut self.scratch;
            s.in_queue[u] = false;
            s.touched[u] = true;

            if s.child_close[u] > s.score_max[u] {
                s.score_max[u] = s.child_close[u];
                s.best_parent[u] = u;
            }
            if s.neighbor_mark[u] {
                s.child_close[u] += 2;
                s.score_max[u] += 2;
            }
            s.child_close[u] -= 1;
            s.score_max[u] -= 1;

            if s.child_close[u] >= 0 && !self.children[u].is_empty() {
                self.bounded_dfs(u);
            }

            let p = self.parent[u];
            if p != r && self.depth[p] + 1 != self.depth[u] {
                failure = Some(Error::InconsistentDepth(u));
                break;
            }
            let s = &mut self.scratch;
            let mut requeue = false;
            if s.child_close[u] > 0 {
                s.child_close[p] += s.child_close[u];
                requeue = true;
            }
            if s.score_max[u] > 0 && s.score_max[u] > s.score_max[p] {
                s.score_max[p] = s.score_max[u];
                s.best_parent[p] = s.best_parent[u];
                requeue = true;
            }
            if requeue && p != r {
                self.push(p);
            }
        }

        let decision = if failure.is_none() {
            Some(self.read_decision())
        } else {
            None
        };
        self.reset_scratch(v);
        let pushes = self.stats.queue_pushes - pushes_before;
        let degree = g.degree(v) as u64;
        self.stats.moves += 1;
        self.stats.degree_sum += degree;
        if degree > 0 {
            let ratio = pushes as f64 / degree as f64;
            if ratio > self.stats.max_pushes_per_degree {
                self.stats.max_pushes_per_degree = ratio;
            }
        }
        match failure {
            Some(e) => Err(e),
            None => Ok(decision.expect("decision computed")),
        }
    }

    /// Counts the subtree of `u` into `child_close(u)`, skipping subtrees that
    /// were already fully accounted for and jumping over the explored part of
    /// aborted searches. Stops, remembering its position, once the count
    /// drops below zero.
    fn bounded_dfs(&mut self, u: usize) {
        let mut x = self.children[u][0];
        while x != u {
            let s = &self.scratch;
            if !s.touched[x] || s.child_close[x] < 0 {
                self.scratch.child_close[u] -= 1;
                let cursor = self.scratch.dfs_cursor[x];
                if cursor != NONE {
                    x = cursor;
                }
                if self.scratch.child_close[u] < 0 {
                    self.scratch.dfs_cursor[u] = x;
                    break;
                }
                x = self.next_preorder(x, u);
            } else {
                x = self.next_after_subtree(x, u);
            }
        }
    }

    fn read_decision(&self) -> MoveDecision {
        let r = self.root();
        let s = &self.scratch;
        let (best, score) = if s.child_close[r] > s.score_max[r] {
            (r, s.child_close[r])
        } else {
            (s.best_parent[r], s.score_max[r])
        };
        if score <= 0 {
            return MoveDecision::isolation();
        }
        let adopted = s
            .touched_log
            .iter()
            .copied()
            .filter(|&c| s.touched[c] && self.parent[c] == best && s.child_close[c] > 0)
            .collect();
        MoveDecision {
            new_parent: self.opt_parent(best),
            adopted,
            savings: score,
        }
    }

    fn reset_scratch(&mut self, v: usize) {
        let r = self.root();
        let s = &mut self.scratch;
        while let Some(u) = s.touched_log.pop() {
            s.reset_slot(u);
        }
        s.queue.clear();
        s.reset_slot(r);
        for &x in self.g.neighbors(v) {
            s.neighbor_mark[x] = false;
        }
    }

    /// Reinserts the detached `v`: at the decided position if that beats the
    /// old one, otherwise exactly where it was. Returns whether it moved.
    pub fn apply_move(&mut self, v: usize, d: &MoveDecision, old: Position) -> Result<bool> {
        if self.parent[v] != NONE {
            return Err(Error::ContractViolation(format!(
                "node {v} is not detached"
            )));
        }
        let r = self.root();
        let improves = d.savings > old.savings;
        let (p, kids) = if improves {
            (d.new_parent.unwrap_or(r), d.adopted.as_slice())
        } else {
            (old.parent.unwrap_or(r), old.children.as_slice())
        };
        if p != r && self.parent[p] == NONE {
            return Err(Error::ContractViolation(format!("parent {p} is detached")));
        }
        if let Some(&c) = kids.iter().find(|&&c| self.parent[c] != p) {
            return Err(Error::ContractViolation(format!(
                "node {c} is not a child of {p}"
            )));
        }
        self.attach(v, p);
        self.depth[v] = if p == r { 0 } else { self.depth[p] + 1 };
        for &c in kids {
            self.detach(c);
            self.attach(c, v);
            self.shift_subtree_depth(c, true);
        }
        if improves {
            self.edits -= d.savings - old.savings;
            self.stats.applied += 1;
        }
        Ok(improves)
    }

    /// One full isolate / search / reinsert step for `v`.
    pub fn move_node(&mut self, v: usize) -> Result<bool> {
        let old = self.isolate(v)?;
        let decision = self.try_move(v)?;
        self.apply_move(v, &decision, old)
    }

    /// Moves every node once in the given order; returns how many moved.
    pub fn round(&mut self, order: &[usize]) -> Result<usize> {
        let mut changed = 0;
        for &v in order {
            if self.move_node(v)? {
                changed += 1;
            }
        }
        Ok(changed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    Heuristic,
    Trivial,
}

#[derive(Clone, Debug, Serialize)]
pub struct QtmRun {
    #[serde(skip)]
    pub forest: SkeletonForest,
    pub edits: usize,
    /// Rounds executed, including a final one that changed nothing.
    pub rounds: usize,
    pub initial_edits: usize,
    /// Edit count after each round.
    pub trace: Vec<usize>,
    pub stats: MoveStats,
}

/// Runs rounds of moves over a fresh seeded shuffle each round until a round
/// changes nothing or `max_rounds` (if any) is reached.
pub fn run_qtm(
    g: &Graph,
    initial: &SkeletonForest,
    max_rounds: Option<usize>,
    seed: u64,
) -> Result<QtmRun> {
    let mut mover = Mover::new(g, initial)?;
    let initial_edits = mover.edits();
    let mut rng = rng::seeded(seed);
    let mut order: Vec<usize> = g.nodes().collect();
    let mut trace = Vec::new();
    let mut rounds = 0;
    while max_rounds.is_none_or(|limit| rounds < limit) {
        order.shuffle(&mut rng);
        let changed = mover.round(&order)?;
        rounds += 1;
        trace.push(mover.edits());
        if changed == 0 {
            break;
        }
    }
    Ok(QtmRun {
        forest: mover.forest(),
        edits: mover.edits(),
        rounds,
        initial_edits,
        trace,
        stats: mover.stats(),
    })
}

pub fn initial_forest(g: &Graph, init: InitKind) -> SkeletonForest {
    match init {
        InitKind::Heuristic => initial_skeleton(g, &count_triangles(g)),
        InitKind::Trivial => SkeletonForest::all_roots(g.node_count()),
    }
}

/// Builds the initial skeleton and runs the mover on it.
pub fn qtm(g: &Graph, init: InitKind, max_rounds: Option<usize>, seed: u64) -> Result<QtmRun> {
    run_qtm(g, &initial_forest(g, init), max_rounds, seed)
}
