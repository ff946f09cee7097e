//! Quasi-threshold graphs with power-law component sizes, and random planted
//! edits on top of them.

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng as _;

use crate::edit::{Edit, EditSet};
use crate::error::{Error, Result};
use crate::forest::{closure_of_forest, SkeletonForest};
use crate::graph::Graph;
use crate::rng::{self, Rng};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub seed: u64,
    pub planted_k: usize,
    pub size_min: usize,
    /// Largest component size; `None` means `0.2·n` (but at least `size_min`).
    pub size_max: Option<usize>,
    /// Component sizes are drawn with probability proportional to `s^exponent`.
    pub exponent: f64,
    pub insert_fraction: f64,
}

impl GenSpec {
    pub fn new(n: usize, planted_k: usize, seed: u64) -> Self {
        GenSpec {
            n,
            seed,
            planted_k,
            size_min: 10,
            size_max: None,
            exponent: -1.0,
            insert_fraction: 0.8,
        }
    }

    pub fn max_size(&self) -> usize {
        self.size_max.unwrap_or(self.n / 5).max(self.size_min)
    }
}

/// A generated graph together with its planted edits.
#[derive(Clone, Debug)]
pub struct Instance {
    /// The quasi-threshold graph before planting.
    pub original: Graph,
    pub skeleton: SkeletonForest,
    /// The graph after the planted edits.
    pub graph: Graph,
    pub planted: EditSet,
}

/// Discrete inverse-CDF sampler over `[lo, hi]` with weights `s^exponent`.
struct PowerLaw {
    lo: usize,
    cumulative: Vec<f64>,
}

impl PowerLaw {
    fn new(lo: usize, hi: usize, exponent: f64) -> Self {
        let mut acc = 0.0;
        let cumulative = (lo..=hi)
            .map(|s| {
                acc += (s as f64).powf(exponent);
                acc
            })
            .collect();
        PowerLaw { lo, cumulative }
    }

    fn sample(&self, rng: &mut Rng) -> usize {
        let total = *self.cumulative.last().expect("non-empty range");
        let x = rng.random::<f64>() * total;
        let i = self.cumulative.partition_point(|&c| c <= x);
        self.lo + i.min(self.cumulative.len() - 1)
    }
}

/// Component sizes summing to `n`. A draw that would leave a remainder
/// smaller than `size_min` is shrunk so that the remainder is exactly
/// `size_min`, or absorbs the remainder when that still fits `size_max`.
fn component_sizes(spec: &GenSpec, rng: &mut Rng) -> Vec<usize> {
    let (lo, hi) = (spec.size_min, spec.max_size());
    let law = PowerLaw::new(lo, hi, spec.exponent);
    let mut sizes = Vec::new();
    let mut remaining = spec.n;
    while remaining > 0 {
        let mut s = law.sample(rng).min(remaining);
        if remaining - s < lo && remaining - s > 0 {
            s = if remaining <= hi {
                remaining
            } else {
                remaining - lo
            };
        }
        sizes.push(s);
        remaining -= s;
    }
    sizes
}

/// A random quasi-threshold graph and the forest it is the closure of. In
/// each component the first node is the root and every later node picks a
/// uniform parent among the earlier ones.
pub fn generate_qt(spec: &GenSpec) -> Result<(Graph, SkeletonForest)> {
    if spec.n < spec.size_min || spec.size_min == 0 {
        return Err(Error::Infeasible(format!(
            "n = {} is below the minimum component size {}",
            spec.n, spec.size_min
        )));
    }
    let mut rng = rng::seeded(spec.seed);
    let sizes = component_sizes(spec, &mut rng);
    let mut parent = Vec::with_capacity(spec.n);
    let mut start = 0;
    for s in sizes {
        parent.push(None);
        for v in 1..s {
            parent.push(Some(start + rng.random_range(0..v)));
        }
        start += s;
    }
    let forest = SkeletonForest::from_parents(parent)?;
    Ok((closure_of_forest(&forest), forest))
}

/// Inserts `⌊0.8k⌋` uniformly chosen non-edges and deletes `⌈0.2k⌉`
/// uniformly chosen edges of `g`.
pub fn plant_edits(g: &Graph, k: usize, seed: u64) -> Result<(Graph, EditSet)> {
    plant_edits_with(g, k, 0.8, seed)
}

pub fn plant_edits_with(
    g: &Graph,
    k: usize,
    insert_fraction: f64,
    seed: u64,
) -> Result<(Graph, EditSet)> {
    if !(0.0..=1.0).contains(&insert_fraction) {
        return Err(Error::Infeasible(format!(
            "insert fraction {insert_fraction} not in [0, 1]"
        )));
    }
    let inserts = ((k as f64 * insert_fraction) + 1e-9).floor() as usize;
    let inserts = inserts.min(k);
    let deletes = k - inserts;
    let n = g.node_count();
    let pairs = n * n.saturating_sub(1) / 2;
    let non_edges = pairs - g.edge_count();
    if inserts > non_edges || deletes > g.edge_count() {
        return Err(Error::Infeasible(format!(
            "cannot insert {inserts} of {non_edges} non-edges and delete {deletes} of {} edges",
            g.edge_count()
        )));
    }
    let mut rng = rng::seeded(seed);
    let mut planted = EditSet::new();

    if inserts * 2 <= non_edges {
        let mut chosen = HashSet::with_capacity(inserts);
        while chosen.len() < inserts {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u != v && !g.has_edge(u, v) && chosen.insert((u.min(v), u.max(v))) {
                planted.push(Edit::insert(u, v));
            }
        }
    } else {
        let all: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        for i in index::sample(&mut rng, all.len(), inserts) {
            planted.push(Edit::insert(all[i].0, all[i].1));
        }
    }

    let edges: Vec<(usize, usize)> = g.edges().collect();
    for i in index::sample(&mut rng, edges.len(), deletes) {
        planted.push(Edit::delete(edges[i].0, edges[i].1));
    }

    let mut out = g.clone();
    for e in &planted {
        e.apply(&mut out)?;
    }
    Ok((out, planted))
}

/// [`generate_qt`] followed by [`plant_edits_with`], seeded from `spec.seed`.
pub fn generate_instance(spec: &GenSpec) -> Result<Instance> {
    let (original, skeleton) = generate_qt(spec)?;
    let (graph, planted) = plant_edits_with(
        &original,
        spec.planted_k,
        spec.insert_fraction,
        spec.seed.wrapping_add(0x9e37_79b9_7f4a_7c15),
    )?;
    Ok(Instance {
        original,
        skeleton,
        graph,
        planted,
    })
}
