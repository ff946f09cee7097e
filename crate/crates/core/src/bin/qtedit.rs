use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use qtedit::exact::{brute_force_optimum, BranchSolver, BRUTE_FORCE_MAX_NODES};
use qtedit::generator::{generate_instance, GenSpec};
use qtedit::lowerbound::{lower_bound_with, BoundOptions};
use qtedit::ng::{count_p4_c4, ng_greedy, NgOptions};
use qtedit::qtm::initial_forest;
use qtedit::{
    apply_edits, count_edits, load_edge_list, recognize, run_qtm, write_edge_list, EditSet, Error,
    Graph, InitKind, Recognition, SkeletonForest,
};

#[derive(Parser)]
#[command(
    name = "qtedit",
    version,
    about = "Quasi-threshold graph editing toolkit"
)]
struct Cli {
    /// Print the summary as one JSON object instead of key=value lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a graph is quasi-threshold, with a skeleton or a P4/C4.
    Recognize {
        graph: PathBuf,
        /// Write the skeleton forest here when the graph is quasi-threshold.
        #[arg(long)]
        skeleton: Option<PathBuf>,
    },
    /// Lower bound on the edit distance from disjoint P4/C4 witnesses.
    Bound {
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Re-sort nodes by residual degree after every removed pair.
        #[arg(long)]
        resort: bool,
    },
    /// Triangle-guided initial skeleton only.
    Init {
        graph: PathBuf,
        #[command(flatten)]
        out: Outputs,
    },
    /// Quasi-Threshold Mover local search.
    Qtm {
        graph: PathBuf,
        #[command(flatten)]
        run: QtmArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Outputs,
        /// Print the edit count after every round.
        #[arg(long)]
        trace: bool,
    },
    /// Greedy P4/C4-count baseline with optional search-tree refinement.
    Ng {
        graph: PathBuf,
        #[command(flatten)]
        run: NgArgs,
        /// Write the edit list here.
        #[arg(long)]
        edits: Option<PathBuf>,
    },
    /// Exact minimum edit set by bounded search tree.
    Exact {
        graph: PathBuf,
        /// Largest edit budget to try.
        #[arg(long)]
        kmax: usize,
        /// Disable lower-bound pruning in the search tree.
        #[arg(long)]
        no_prune: bool,
        /// Also report the exhaustive optimum (small graphs only).
        #[arg(long)]
        brute_force: bool,
        #[arg(long)]
        edits: Option<PathBuf>,
    },
    /// Generate a quasi-threshold graph and plant random edits into it.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Writes PREFIX.edges, PREFIX.skeleton and PREFIX.edits.
        #[arg(long)]
        out: PathBuf,
    },
    /// Repeated seeded runs with min/mean/std statistics.
    Bench {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Qtm)]
        algo: Algo,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        qtm: QtmArgs,
    },
    /// Apply an edit list or a skeleton to a graph and check the result.
    Verify {
        graph: PathBuf,
        #[arg(
            long,
            conflicts_with = "skeleton",
            required_unless_present = "skeleton"
        )]
        edits: Option<PathBuf>,
        #[arg(long)]
        skeleton: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Outputs {
    /// Write the resulting skeleton forest here.
    #[arg(long)]
    skeleton: Option<PathBuf>,
    /// Write the edit list turning the graph into the skeleton's closure.
    #[arg(long)]
    edits: Option<PathBuf>,
}

#[derive(Args)]
struct QtmArgs {
    /// Maximum number of rounds.
    #[arg(long, default_value_t = 4, conflicts_with = "until_stable")]
    rounds: usize,
    /// Run until a round moves no node instead of a fixed round limit.
    #[arg(long)]
    until_stable: bool,
    #[arg(long, value_enum, default_value_t = Init::Heuristic)]
    init: Init,
}

impl QtmArgs {
    fn max_rounds(&self) -> Option<usize> {
        (!self.until_stable).then_some(self.rounds)
    }
}

#[derive(Args)]
struct NgArgs {
    /// Refine the last edits with the bounded search tree.
    #[arg(long)]
    bst: bool,
    #[arg(long, default_value_t = 10)]
    revert_depth: usize,
    /// Never edit a pair twice during the greedy phase.
    #[arg(long)]
    freeze: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Init {
    Heuristic,
    Trivial,
}

impl From<Init> for InitKind {
    fn from(i: Init) -> Self {
        match i {
            Init::Heuristic => InitKind::Heuristic,
            Init::Trivial => InitKind::Trivial,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Qtm,
    Ng,
    NgBst,
    Bound,
}

/// Ordered summary printed as `key=value` lines or one JSON object.
#[derive(Default)]
struct Summary {
    fields: Vec<(String, Value)>,
}

impl Summary {
    fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    fn print(&self, as_json: bool) {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        if as_json {
            let map: Map<String, Value> = self.fields.iter().cloned().collect();
            let _ = writeln!(out, "{}", Value::Object(map));
        } else {
            for (k, v) in &self.fields {
                match v {
                    Value::String(s) => {
                        let _ = writeln!(out, "{k}={s}");
                    }
                    other => {
                        let _ = writeln!(out, "{k}={other}");
                    }
                }
            }
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph, Error> {
    load_edge_list(BufReader::new(File::open(path)?))
}

fn read_forest(path: &Path) -> Result<SkeletonForest, Error> {
    SkeletonForest::read_text(BufReader::new(File::open(path)?))
}

fn read_edits(path: &Path) -> Result<EditSet, Error> {
    EditSet::read_text(BufReader::new(File::open(path)?))
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn write_outputs(g: &Graph, f: &SkeletonForest, out: &Outputs) -> Result<(), Error> {
    if let Some(path) = &out.skeleton {
        write_file(path, &f.to_text())?;
    }
    if let Some(path) = &out.edits {
        write_file(path, &EditSet::from_forest(g, f)?.to_text())?;
    }
    Ok(())
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Minimum, mean and population standard deviation.
fn stats(xs: &[f64]) -> (f64, f64, f64) {
    let n = xs.len().max(1) as f64;
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (min, mean, var.sqrt())
}

fn run(cli: &Cli) -> Result<Summary, Error> {
    let mut s = Summary::default();
    match &cli.command {
        Command::Recognize { graph, skeleton } => {
            let g = read_graph(graph)?;
            s.put("nodes", g.node_count()).put("edges", g.edge_count());
            match recognize(&g) {
                Recognition::QuasiThreshold(f) => {
                    s.put("quasi-threshold", "yes");
                    if let Some(path) = skeleton {
                        write_file(path, &f.to_text())?;
                    }
                }
                Recognition::Forbidden(c) => {
                    s.put("quasi-threshold", "no")
                        .put("certificate", c.to_string());
                }
            }
        }
        Command::Bound {
            graph,
            seed,
            resort,
        } => {
            let g = read_graph(graph)?;
            let start = Instant::now();
            let r = lower_bound_with(&g, *seed, BoundOptions { resort: *resort });
            s.put("bound", r.bound).put("ms", millis(start));
        }
        Command::Init { graph, out } => {
            let g = read_graph(graph)?;
            let start = Instant::now();
            let f = initial_forest(&g, InitKind::Heuristic);
            let ms = millis(start);
            s.put("edits", count_edits(&g, &f)?).put("ms", ms);
            write_outputs(&g, &f, out)?;
        }
        Command::Qtm {
            graph,
            run: args,
            seed,
            out,
            trace,
        } => {
            let g = read_graph(graph)?;
            let start = Instant::now();
            let f = initial_forest(&g, args.init.into());
            let r = run_qtm(&g, &f, args.max_rounds(), *seed)?;
            let ms = millis(start);
            s.put("initial_edits", r.initial_edits)
                .put("edits", r.edits)
                .put("rounds", r.rounds)
                .put("max_pushes_per_degree", r.stats.max_pushes_per_degree)
                .put("ms", ms);
            if *trace {
                let t: Vec<String> = r.trace.iter().map(|e| e.to_string()).collect();
                s.put("trace", t.join(","));
            }
            write_outputs(&g, &r.forest, out)?;
        }
        Command::Ng {
            graph,
            run: args,
            edits,
        } => {
            let g = read_graph(graph)?;
            let start = Instant::now();
            let opts = NgOptions {
                revert_depth: args.revert_depth,
                use_bst: args.bst,
                freeze_edited: args.freeze,
            };
            let r = ng_greedy(&g, opts);
            let ms = millis(start);
            let c = count_p4_c4(&g);
            s.put("p4", c.p4)
                .put("c4", c.c4)
                .put("edits", r.edits.len())
                .put("greedy_edits", r.greedy_len)
                .put("iterations", r.greedy_len)
                .put("ms", ms);
            if let Some(path) = edits {
                write_file(path, &r.edits.to_text())?;
            }
        }
        Command::Exact {
            graph,
            kmax,
            no_prune,
            brute_force,
            edits,
        } => {
            let g = read_graph(graph)?;
            let solver = BranchSolver {
                prune_with_lower_bound: !no_prune,
            };
            let start = Instant::now();
            let sol = solver.solve(&g, *kmax);
            s.put("ms", millis(start));
            match &sol {
                Some(set) => s.put("optimum", set.len()),
                None => s.put("optimum", format!(">{kmax}")),
            };
            if *brute_force {
                if g.node_count() > BRUTE_FORCE_MAX_NODES {
                    return Err(Error::TooLarge {
                        n: g.node_count(),
                        max: BRUTE_FORCE_MAX_NODES,
                    });
                }
                s.put("brute_force", brute_force_optimum(&g)?);
            }
            if let (Some(path), Some(set)) = (edits, &sol) {
                write_file(path, &set.to_text())?;
            }
        }
        Command::Generate { n, k, seed, out } => {
            let inst = generate_instance(&GenSpec::new(*n, *k, *seed))?;
            let with_ext = |ext: &str| {
                let mut p = out.clone().into_os_string();
                p.push(ext);
                PathBuf::from(p)
            };
            let mut text = Vec::new();
            write_edge_list(&inst.graph, &mut text)?;
            write_file(&with_ext(".edges"), &String::from_utf8_lossy(&text))?;
            write_file(&with_ext(".skeleton"), &inst.skeleton.to_text())?;
            write_file(&with_ext(".edits"), &inst.planted.to_text())?;
            s.put("nodes", inst.graph.node_count())
                .put("edges", inst.graph.edge_count())
                .put("planted", inst.planted.len());
        }
        Command::Bench {
            graph,
            algo,
            runs,
            seed,
            qtm,
        } => {
            let g = read_graph(graph)?;
            let mut edits = Vec::new();
            let mut iterations = Vec::new();
            let mut times = Vec::new();
            for i in 0..*runs {
                let run_seed = seed.wrapping_add(i as u64);
                let start = Instant::now();
                let (e, it) = match algo {
                    Algo::Qtm => {
                        let f = initial_forest(&g, qtm.init.into());
                        let r = run_qtm(&g, &f, qtm.max_rounds(), run_seed)?;
                        (r.edits, r.rounds)
                    }
                    Algo::Ng | Algo::NgBst => {
                        let opts = NgOptions {
                            use_bst: *algo == Algo::NgBst,
                            ..NgOptions::default()
                        };
                        let r = ng_greedy(&g, opts);
                        (r.edits.len(), r.greedy_len)
                    }
                    Algo::Bound => {
                        let r = lower_bound_with(&g, run_seed, BoundOptions::default());
                        (r.bound, 1)
                    }
                };
                times.push(millis(start));
                edits.push(e as f64);
                iterations.push(it as f64);
            }
            let (min, mean, std) = stats(&edits);
            let (_, it_mean, _) = stats(&iterations);
            let (_, ms_mean, _) = stats(&times);
            s.put("runs", *runs)
                .put("edits_min", min)
                .put("edits_mean", mean)
                .put("edits_std", std)
                .put("iterations_mean", it_mean)
                .put("ms_mean", ms_mean);
        }
        Command::Verify {
            graph,
            edits,
            skeleton,
        } => {
            let g = read_graph(graph)?;
            let set = match (edits, skeleton) {
                (Some(path), _) => read_edits(path)?,
                (None, Some(path)) => EditSet::from_forest(&g, &read_forest(path)?)?,
                (None, None) => unreachable!("clap requires one of the two"),
            };
            let h = apply_edits(&g, &set)?;
            let yes = recognize(&h).is_quasi_threshold();
            s.put("edits", set.len())
                .put("quasi-threshold", if yes { "yes" } else { "no" });
        }
    }
    Ok(s)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(summary) => {
            summary.print(cli.json);
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string() }));
            }
            eprintln!("qtedit: {e}");
            ExitCode::from(1)
        }
    }
}
