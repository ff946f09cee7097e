//! Acceptance gate. Every criterion prints exactly one `PASS`, `FAIL` or
//! `SKIP` line; the test fails if any criterion fails. Criteria run one after
//! another so wall-clock limits are not distorted by parallel tests.
//!
//! Optional datasets (dolphins, football, grass_web) are looked up in
//! `tests/data/` and in the directory named by `QTEDIT_DATA`.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use qtedit::exact::{brute_force_optimum, bst_solve};
use qtedit::generator::{generate_instance, GenSpec};
use qtedit::ng::{count_p4_c4, delta_p4_c4, ng_greedy, NgOptions};
use qtedit::qtm::initial_forest;
use qtedit::rng;
use qtedit::testutil::{all_graphs, random_forest, random_graph};
use qtedit::{
    count_edits, load_edge_list, lower_bound, permute_nodes, qtm, recognize, verify_certificate,
    Edit, EditKind, Graph, InitKind, Mover, Recognition, SkeletonForest,
};
use rand::Rng as _;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

#[derive(Default)]
struct Report {
    failed: Vec<usize>,
}

impl Report {
    fn record(&mut self, id: usize, name: &str, outcome: Outcome) {
        let (tag, detail) = match outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                self.failed.push(id);
                ("FAIL", d)
            }
            Outcome::Skip(d) => ("SKIP", d),
        };
        // bypass the test harness capture so the lines always show
        let mut out = std::io::stdout();
        let _ = writeln!(out, "{tag} [{id:>2}] {name}: {detail}");
        let _ = out.flush();
    }
}

type Criterion = fn() -> Outcome;

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn data_dirs() -> Vec<PathBuf> {
    let mut dirs = vec![PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")];
    if let Some(extra) = std::env::var_os("QTEDIT_DATA") {
        dirs.push(PathBuf::from(extra));
    }
    dirs
}

fn dataset(name: &str) -> Option<Graph> {
    data_dirs()
        .into_iter()
        .map(|d| d.join(format!("{name}.edges")))
        .find(|p| p.exists())
        .map(|p| load_edge_list(BufReader::new(File::open(&p).unwrap())).expect("valid edge list"))
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// Induced P4 or C4 present, by scanning all 4-node subsets.
fn has_forbidden_subgraph(g: &Graph) -> bool {
    let n = g.node_count();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let q = [a, b, c, d];
                    let mut deg = [0; 4];
                    let mut m = 0;
                    for i in 0..4 {
                        for j in i + 1..4 {
                            if g.has_edge(q[i], q[j]) {
                                deg[i] += 1;
                                deg[j] += 1;
                                m += 1;
                            }
                        }
                    }
                    deg.sort_unstable();
                    if (m == 3 && deg == [1, 1, 2, 2]) || (m == 4 && deg == [2, 2, 2, 2]) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (mut graphs, mut mismatches, mut bad_certificates) = (0, 0, 0);
    for g in all_graphs(6) {
        graphs += 1;
        match recognize(&g) {
            Recognition::QuasiThreshold(f) => {
                if has_forbidden_subgraph(&g) || count_edits(&g, &f).unwrap() != 0 {
                    mismatches += 1;
                }
            }
            Recognition::Forbidden(c) => {
                if !has_forbidden_subgraph(&g) {
                    mismatches += 1;
                }
                if !verify_certificate(&g, &c) {
                    bad_certificates += 1;
                }
            }
        }
    }
    let t = secs(start.elapsed());
    verdict(
        graphs == 32768 && mismatches == 0 && bad_certificates == 0 && t < 10.0,
        format!(
            "{graphs} graphs, {mismatches} mismatches, {bad_certificates} invalid certificates, \
             {t:.2} s (limit 10 s)"
        ),
    )
}

/// Best saving over every (parent, subset of that parent's children)
/// placement of the detached node `v`, relative to leaving it isolated.
fn exhaustive_best(g: &Graph, without_v: &SkeletonForest, v: usize) -> i64 {
    let n = g.node_count();
    let children = without_v.children();
    let roots: Vec<usize> = without_v.roots().filter(|&u| u != v).collect();
    let isolated = count_edits(g, without_v).unwrap() as i64;
    let mut best = 0;
    let parents = std::iter::once(None).chain((0..n).filter(|&u| u != v).map(Some));
    for p in parents {
        let kids = match p {
            None => &roots,
            Some(p) => &children[p],
        };
        for mask in 0u32..1 << kids.len() {
            let mut parent = without_v.parents().to_vec();
            parent[v] = p;
            for (i, &c) in kids.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    parent[c] = Some(v);
                }
            }
            let f = SkeletonForest::from_parents(parent).unwrap();
            best = best.max(isolated - count_edits(g, &f).unwrap() as i64);
        }
    }
    best
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (mut moves, mut wrong) = (0, 0);
    for seed in 0..200u64 {
        let n = 2 + seed as usize % 8;
        let g = random_graph(n, 0.15 + (seed % 5) as f64 * 0.15, 1000 + seed);
        let forest = if seed % 2 == 0 {
            initial_forest(&g, InitKind::Heuristic)
        } else {
            random_forest(n, seed)
        };
        let mut m = Mover::new(&g, &forest).unwrap();
        for v in 0..n {
            let old = m.isolate(v).unwrap();
            let expected = exhaustive_best(&g, &m.forest_with_detached(v), v);
            let d = m.try_move(v).unwrap();
            moves += 1;
            if d.savings != expected || !m.scratch().is_clean() {
                wrong += 1;
            }
            m.apply_move(v, &d, old).unwrap();
        }
    }
    let t = secs(start.elapsed());
    verdict(
        wrong == 0 && t < 60.0,
        format!("200 graphs, {moves} moves, {wrong} suboptimal, {t:.2} s (limit 60 s)"),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let (mut graphs, mut violations) = (0, 0);
    for n in 1..=6 {
        for g in all_graphs(n) {
            graphs += 1;
            let lb = lower_bound(&g, 0).bound;
            let opt = brute_force_optimum(&g).unwrap();
            let bst = bst_solve(&g, opt).map(|s| s.len());
            let heuristic = qtm(&g, InitKind::Heuristic, None, 0).unwrap().edits;
            if !(lb <= opt && bst == Some(opt) && opt <= heuristic) {
                violations += 1;
            }
        }
    }
    verdict(
        violations == 0,
        format!(
            "{graphs} graphs on 1..=6 nodes, {violations} violations of lb <= opt = bst <= qtm, \
             {:.2} s",
            secs(start.elapsed())
        ),
    )
}

struct QtmStats {
    min: usize,
    mean: f64,
    max_ms: f64,
}

fn qtm_runs(g: &Graph, seeds: std::ops::Range<u64>, rounds: Option<usize>) -> QtmStats {
    let mut edits = Vec::new();
    let mut max_ms = 0f64;
    for seed in seeds {
        let start = Instant::now();
        let run = qtm(g, InitKind::Heuristic, rounds, seed).unwrap();
        max_ms = max_ms.max(secs(start.elapsed()) * 1e3);
        edits.push(run.edits);
    }
    QtmStats {
        min: *edits.iter().min().unwrap(),
        mean: edits.iter().sum::<usize>() as f64 / edits.len() as f64,
        max_ms,
    }
}

fn criterion_4() -> Outcome {
    let g = dataset("karate").expect("karate ships with the tests");
    assert_eq!((g.node_count(), g.edge_count()), (34, 78));
    let s = qtm_runs(&g, 0..10, None);
    verdict(
        s.min <= 21 && s.mean <= 22.0 && s.max_ms < 100.0,
        format!(
            "min {} (<= 21), mean {:.1} (<= 22), slowest run {:.2} ms (< 100 ms)",
            s.min, s.mean, s.max_ms
        ),
    )
}

fn criterion_5() -> Outcome {
    let limits = [
        ("dolphins", 74),
        ("lesmis", 62),
        ("grass_web", 37),
        ("football", 253),
    ];
    let mut parts = Vec::new();
    let mut missing = Vec::new();
    let mut ok = true;
    for (name, limit) in limits {
        match dataset(name) {
            Some(g) => {
                let s = qtm_runs(&g, 0..10, None);
                ok &= s.min <= limit;
                parts.push(format!("{name} min {} (<= {limit})", s.min));
            }
            None => missing.push(name),
        }
    }
    let mut detail = parts.join(", ");
    if !missing.is_empty() {
        detail.push_str(&format!("; not found: {}", missing.join(", ")));
    }
    if !ok {
        Outcome::Fail(detail)
    } else if !missing.is_empty() {
        Outcome::Skip(detail)
    } else {
        Outcome::Pass(detail)
    }
}

fn criterion_6() -> Outcome {
    let karate = dataset("karate").expect("karate ships with the tests");
    let mut best = usize::MAX;
    for seed in 0..10 {
        // the greedy is deterministic; seeds relabel the nodes
        let (g, _) = permute_nodes(&karate, seed);
        best = best.min(ng_greedy(&g, NgOptions::default()).edits.len());
    }
    let mut detail = format!("NG+BST karate min {best} (= 21)");
    let ok = best == 21;
    let Some(football) = dataset("football") else {
        detail.push_str("; football not found, speed ratio unchecked");
        return if ok {
            Outcome::Skip(detail)
        } else {
            Outcome::Fail(detail)
        };
    };
    let start = Instant::now();
    for seed in 0..10 {
        qtm(&football, InitKind::Heuristic, None, seed).unwrap();
    }
    let qtm_ms = secs(start.elapsed()) * 1e3 / 10.0;
    let start = Instant::now();
    ng_greedy(
        &football,
        NgOptions {
            use_bst: false,
            ..NgOptions::default()
        },
    );
    let ng_ms = secs(start.elapsed()) * 1e3;
    let ratio = ng_ms / qtm_ms;
    detail.push_str(&format!(
        "; football NG {ng_ms:.1} ms vs QTM {qtm_ms:.3} ms = {ratio:.0}x"
    ));
    verdict(ok && ratio >= 100.0, detail)
}

fn criterion_7() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (n, k, limit) in [(1000, 400, 400.0), (100, 20, 21.0)] {
        let mut total = 0;
        let mut max_s = 0f64;
        for seed in 0..10 {
            let inst = generate_instance(&GenSpec::new(n, k, seed)).unwrap();
            let start = Instant::now();
            total += qtm(&inst.graph, InitKind::Heuristic, Some(4), seed)
                .unwrap()
                .edits;
            max_s = max_s.max(secs(start.elapsed()));
        }
        let mean = total as f64 / 10.0;
        ok &= mean <= limit && max_s < 1.0;
        parts.push(format!(
            "n={n} k={k} mean {mean:.1} (<= {limit}), slowest {max_s:.3} s"
        ));
    }
    verdict(ok, parts.join("; "))
}

fn criterion_8() -> Outcome {
    let mut rng = rng::seeded(8);
    let mut mismatches = 0;
    for i in 0..1000u64 {
        let n = rng.random_range(4..=200);
        let g = if i % 3 == 0 {
            let k = rng.random_range(0..=n / 2);
            let spec = GenSpec {
                size_min: 2,
                ..GenSpec::new(n, k, i)
            };
            generate_instance(&spec).unwrap().graph
        } else {
            random_graph(n, rng.random_range(0.01..0.3), i)
        };
        let u = rng.random_range(0..n);
        let v = (u + rng.random_range(1..n)) % n;
        let kind = if g.has_edge(u, v) {
            EditKind::Delete
        } else {
            EditKind::Insert
        };
        let e = Edit::new(kind, u, v);
        let before = count_p4_c4(&g);
        let mut h = g.clone();
        e.apply(&mut h).unwrap();
        let after = count_p4_c4(&h);
        let (dp, dc) = delta_p4_c4(&g, &e).unwrap();
        if after.p4 as i64 - before.p4 as i64 != dp || after.c4 as i64 - before.c4 as i64 != dc {
            mismatches += 1;
        }
    }
    verdict(
        mismatches == 0,
        format!("1000 (graph, edit) pairs, {mismatches} mismatches"),
    )
}

fn criterion_9() -> Outcome {
    let g = dataset("karate").expect("karate ships with the tests");
    let bounds: Vec<usize> = (0..10).map(|seed| lower_bound(&g, seed).bound).collect();
    let in_range = bounds.iter().all(|b| (1..=21).contains(b));
    let first_eight = bounds.iter().position(|&b| b == 8);
    verdict(
        in_range && first_eight.is_some(),
        format!("bounds over seeds 0..10: {bounds:?}; bound 8 at seed {first_eight:?}"),
    )
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let inst = generate_instance(&GenSpec::new(100_000, 160_000, 1)).unwrap();
    let gen_s = secs(start.elapsed());
    let start = Instant::now();
    let run = qtm(&inst.graph, InitKind::Heuristic, Some(4), 1).unwrap();
    let t = secs(start.elapsed());
    verdict(
        run.rounds <= 4 && run.edits <= 160_000 && t < 60.0,
        format!(
            "m={} edits {} (<= 160000), {} rounds in {t:.1} s (< 60 s), generation {gen_s:.1} s",
            inst.graph.edge_count(),
            run.edits,
            run.rounds
        ),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, Criterion); 10] = [
        (
            "recognition agrees with subgraph scan on all 6-node graphs",
            criterion_1,
        ),
        (
            "single moves are optimal on small random graphs",
            criterion_2,
        ),
        (
            "lower bound <= optimum = search tree <= QTM on all small graphs",
            criterion_3,
        ),
        ("QTM on karate", criterion_4),
        ("QTM on the small real-world suite", criterion_5),
        ("greedy baseline with search tree", criterion_6),
        ("planted-edit recovery", criterion_7),
        ("incremental P4/C4 counts", criterion_8),
        ("lower bound on karate", criterion_9),
        ("large generated graph", criterion_10),
    ];
    let mut report = Report::default();
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        report.record(i + 1, name, check());
    }
    assert!(
        report.failed.is_empty(),
        "failed criteria: {:?}",
        report.failed
    );
}
