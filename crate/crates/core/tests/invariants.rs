//! Cross-module properties: work bounds, planted-edit recovery, generated
//! inputs and text-format round trips.

use proptest::prelude::*;

use qtedit::generator::{generate_instance, GenSpec};
use qtedit::testutil::{random_forest, random_graph};
use qtedit::{
    apply_edits, closure_of_forest, count_edits, parse_edge_list, qtm, recognize, EditSet,
    InitKind, SkeletonForest,
};

/// Largest number of queue pushes per unit of degree in a single move,
/// measured at 2.0 on every benchmark input (karate, lesmis, generated
/// graphs up to 100,000 nodes) and pinned here.
const PUSHES_PER_DEGREE: f64 = 2.0;

#[test]
fn queue_pushes_are_linear_in_degree() {
    for seed in 0..10 {
        let inst = generate_instance(&GenSpec::new(2000, 300, seed)).unwrap();
        let run = qtm(&inst.graph, InitKind::Heuristic, None, seed).unwrap();
        assert!(
            run.stats.max_pushes_per_degree <= PUSHES_PER_DEGREE,
            "{:?}",
            run.stats
        );
        let g = random_graph(300, 0.05, seed);
        for init in [InitKind::Heuristic, InitKind::Trivial] {
            let run = qtm(&g, init, None, seed).unwrap();
            assert!(
                run.stats.max_pushes_per_degree <= PUSHES_PER_DEGREE,
                "{:?}",
                run.stats
            );
            assert!(
                run.stats.queue_pushes as f64 <= PUSHES_PER_DEGREE * run.stats.degree_sum as f64
            );
        }
    }
}

#[test]
fn qtm_stays_within_planted_distance() {
    for k in [20, 400] {
        for seed in 0..5 {
            let inst = generate_instance(&GenSpec::new(1000, k, seed)).unwrap();
            let run = qtm(&inst.graph, InitKind::Heuristic, Some(4), seed).unwrap();
            assert!(run.edits <= k, "k {k} seed {seed}: {} edits", run.edits);
            // the original skeleton is a witness of distance at most k
            assert!(count_edits(&inst.graph, &inst.skeleton).unwrap() <= k);
        }
    }
}

#[test]
fn generated_graphs_are_recognized() {
    for seed in 0..10 {
        let inst = generate_instance(&GenSpec::new(500, 0, seed)).unwrap();
        assert!(recognize(&inst.original).is_quasi_threshold());
        assert_eq!(inst.graph, inst.original);
    }
}

#[test]
fn qtm_rounds_terminate_with_a_quiet_round() {
    for seed in 0..10 {
        let g = random_graph(120, 0.06, seed);
        let run = qtm(&g, InitKind::Trivial, None, seed).unwrap();
        assert!(run.trace.len() >= 2 || run.edits == run.initial_edits);
        let n = run.trace.len();
        if n >= 2 {
            assert_eq!(run.trace[n - 1], run.trace[n - 2]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn skeleton_text_round_trips(n in 1usize..60, seed in any::<u64>()) {
        let f = random_forest(n, seed);
        let back = SkeletonForest::read_text(f.to_text().as_bytes()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn edge_list_round_trips(n in 1usize..40, p in 0.0f64..0.5, seed in any::<u64>()) {
        let g = random_graph(n, p, seed);
        let mut text = Vec::new();
        qtedit::write_edge_list(&g, &mut text).unwrap();
        prop_assert_eq!(parse_edge_list(std::str::from_utf8(&text).unwrap()).unwrap(), g);
    }

    #[test]
    fn qtm_result_is_a_valid_edit_set(n in 2usize..40, p in 0.0f64..0.6, seed in any::<u64>()) {
        let g = random_graph(n, p, seed);
        let run = qtm(&g, InitKind::Heuristic, None, seed).unwrap();
        let edits = EditSet::from_forest(&g, &run.forest).unwrap();
        prop_assert_eq!(edits.len(), run.edits);
        let h = apply_edits(&g, &edits).unwrap();
        prop_assert_eq!(&h, &closure_of_forest(&run.forest));
        prop_assert!(recognize(&h).is_quasi_threshold());
        let text = EditSet::read_text(edits.to_text().as_bytes()).unwrap();
        prop_assert_eq!(text, edits);
    }
}
