//! Small graph builders shared by the unit tests.

use rand::Rng as _;

use crate::graph::Graph;
use crate::rng;

pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = rng::seeded(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Every labeled graph on `n` nodes, edge `i` of the mask following the
/// lexicographic pair order.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        Graph::from_edges(
            n,
            pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e),
        )
    })
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n)))
}

/// Random forest on a shuffled node order; roughly one node in five is a root.
pub fn random_forest(n: usize, seed: u64) -> crate::forest::SkeletonForest {
    use rand::seq::SliceRandom;
    let mut rng = rng::seeded(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut parent = vec![None; n];
    for i in 1..n {
        if rng.random_bool(0.8) {
            parent[perm[i]] = Some(perm[rng.random_range(0..i)]);
        }
    }
    crate::forest::SkeletonForest::from_parents(parent).expect("parents precede children")
}
