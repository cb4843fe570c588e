use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hc_cli::edgelist::{parse_edge_list, write_edge_list, FormatError};
use hc_cli::experiment::{parse_records, run_experiment_with, summarize, ExperimentConfig, ExperimentError};
use hc_cli::mc::study_bisection;
use hc_core::analysis::{
    bisection_coefficients, decompose_opt_tree, delta_max, opt_upper_bound,
};
use hc_core::generate::{generate, Generator, PLANTED_GAMMA, PLANTED_NOISE};
use hc_core::linkage::average_linkage;
use hc_core::mub::{ExactMub, LocalSearchMub, MubSolver};
use hc_core::oracle::opt_dp;
use hc_core::pipeline::{hc_via_mub, hc_via_mub_recursive};
use hc_core::{HCTree, SimilarityGraph};

#[derive(Parser)]
#[command(name = "hc-cli", version, about = "Hierarchical clustering under the similarity objective")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverKind {
    Exact,
    Local,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Gnp,
    Uniform,
    PlantedHierarchy,
    TwoCliques,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a tree on a graph.
    Eval {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        tree: PathBuf,
    },
    /// Average-Linkage.
    AvgLink {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Balanced bisection maximizing the uncut weight.
    Mub {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        solver: SolverKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
    },
    /// Bisect at the root, then Average-Linkage (or recurse) on each side.
    Hc {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        solver: SolverKind,
        #[arg(long, value_name = "DEPTH")]
        recursive: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact optimum for small graphs.
    Opt {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Three-set decomposition of a tree and the derived bounds.
    Analyze {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        tree: PathBuf,
    },
    /// Monte Carlo study of the randomized bisection.
    McBisect {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        tree: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate an instance in edge-list format.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = PLANTED_GAMMA)]
        gamma: f64,
        #[arg(long, default_value_t = PLANTED_NOISE)]
        noise: f64,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment config, writing JSON-lines records.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarize JSON-lines records.
    Summarize {
        #[arg(long)]
        records: PathBuf,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{0}")]
    Input(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl From<hc_core::Error> for CliError {
    fn from(e: hc_core::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn io_error(path: &Path, source: io::Error) -> CliError {
    CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| io_error(path, e))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| io_error(path, e))
    }
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_error(path, e))
}

fn read_graph(path: &Path) -> Result<SimilarityGraph, CliError> {
    parse_edge_list(&read_input(path)?).map_err(|e: FormatError| {
        CliError::Input(format!("{}: {e}", path.display()))
    })
}

fn read_tree(path: &Path, n: usize) -> Result<HCTree, CliError> {
    HCTree::parse(read_input(path)?.trim(), n)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn print_tree(out: &mut impl Write, t: &HCTree, g: &SimilarityGraph) -> Result<(), CliError> {
    let _ = writeln!(out, "tree {t}");
    let _ = writeln!(out, "mw {}", t.mw_objective(g)?);
    let _ = writeln!(out, "dasgupta {}", t.dasgupta_objective(g)?);
    Ok(())
}

fn save_tree(out: Option<&Path>, t: &HCTree) -> Result<(), CliError> {
    match out {
        Some(path) => write_output(path, &format!("{t}\n")),
        None => Ok(()),
    }
}

fn solver(kind: SolverKind, seed: u64, restarts: usize) -> Box<dyn MubSolver> {
    match kind {
        SolverKind::Exact => Box::new(ExactMub::default()),
        SolverKind::Local => Box::new(LocalSearchMub::new(seed, restarts)),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Eval { graph, tree } => {
            let g = read_graph(&graph)?;
            let t = read_tree(&tree, g.n())?;
            print_tree(&mut out, &t, &g)?;
        }
        Command::AvgLink { graph, out: path } => {
            let g = read_graph(&graph)?;
            let t = average_linkage(&g, None)?;
            print_tree(&mut out, &t, &g)?;
            save_tree(path.as_deref(), &t)?;
        }
        Command::Mub {
            graph,
            solver: kind,
            seed,
            restarts,
        } => {
            let g = read_graph(&graph)?;
            let b = solver(kind, seed, restarts).solve(&g)?;
            let _ = writeln!(out, "L {}", b.left());
            let _ = writeln!(out, "R {}", b.right());
            let _ = writeln!(out, "uncut {}", b.uncut_weight());
        }
        Command::Hc {
            graph,
            solver: kind,
            recursive,
            seed,
            restarts,
            out: path,
        } => {
            let g = read_graph(&graph)?;
            let s = solver(kind, seed, restarts);
            let t = match recursive {
                Some(depth) => hc_via_mub_recursive(&g, s.as_ref(), depth)?,
                None => hc_via_mub(&g, s.as_ref())?,
            };
            print_tree(&mut out, &t, &g)?;
            save_tree(path.as_deref(), &t)?;
        }
        Command::Opt { graph, out: path } => {
            let g = read_graph(&graph)?;
            let opt = opt_dp(&g)?;
            let _ = writeln!(out, "opt {}", opt.value);
            let _ = writeln!(out, "tree {}", opt.tree);
            save_tree(path.as_deref(), &opt.tree)?;
        }
        Command::Analyze { graph, tree } => {
            let g = read_graph(&graph)?;
            let t = read_tree(&tree, g.n())?;
            let d = decompose_opt_tree(&t, &g)?;
            let _ = writeln!(out, "A {}", d.a);
            let _ = writeln!(out, "B {}", d.b);
            let _ = writeln!(out, "C {}", d.c);
            let _ = writeln!(out, "alpha {}", d.alpha);
            let _ = writeln!(out, "beta {}", d.beta);
            let _ = writeln!(out, "c {}", d.c_fraction());
            match bisection_coefficients(&d) {
                Some(k) => {
                    let _ = writeln!(out, "delta {}", k.delta);
                }
                None => {
                    let _ = writeln!(out, "delta degenerate");
                }
            }
            let _ = writeln!(out, "delta_max {}", delta_max(d.c_fraction())?);
            let _ = writeln!(out, "upper_bound {}", opt_upper_bound(&g, &d)?);
            let _ = writeln!(out, "tree_value {}", t.mw_objective(&g)?);
        }
        Command::McBisect {
            graph,
            tree,
            trials,
            seed,
        } => {
            let g = read_graph(&graph)?;
            let t = read_tree(&tree, g.n())?;
            let d = decompose_opt_tree(&t, &g)?;
            let s = study_bisection(&g, &d, trials, seed)?;
            let _ = writeln!(out, "trials {}", s.trials);
            let _ = writeln!(out, "alpha {}", s.alpha);
            let _ = writeln!(out, "beta {}", s.beta);
            let _ = writeln!(out, "delta {}", s.delta);
            let _ = writeln!(out, "delta_max {}", s.delta_max);
            let _ = writeln!(
                out,
                "red_uncut {} (se {}) predicted {}",
                s.red_uncut.mean,
                s.red_uncut.std_error,
                s.predicted_red_uncut()
            );
            let _ = writeln!(
                out,
                "blue_uncut {} (se {}) predicted_lower {}",
                s.blue_uncut.mean,
                s.blue_uncut.std_error,
                s.predicted_blue_lower()
            );
        }
        Command::Gen {
            kind,
            n,
            p,
            gamma,
            noise,
            epsilon,
            seed,
            out: path,
        } => {
            let kind = match kind {
                Kind::Gnp => Generator::Gnp {
                    p: p.ok_or_else(|| CliError::Input("gnp needs --p".into()))?,
                },
                Kind::Uniform => Generator::Uniform,
                Kind::PlantedHierarchy => Generator::PlantedHierarchy { gamma, noise },
                Kind::TwoCliques => Generator::TwoCliques { epsilon },
            };
            let text = format!("# {kind} seed={seed}\n{}", write_edge_list(&generate(&kind, n, seed)?));
            match path {
                Some(path) => write_output(&path, &text)?,
                None => {
                    let _ = out.write_all(text.as_bytes());
                }
            }
        }
        Command::Experiment { config, out: path } => {
            let config = ExperimentConfig::parse(&read_input(&config)?)?;
            let mut sink: Box<dyn Write> = match &path {
                Some(p) => Box::new(io::BufWriter::new(
                    fs::File::create(p).map_err(|e| io_error(p, e))?,
                )),
                None => Box::new(out),
            };
            let mut failed = None;
            run_experiment_with(&config, |r| {
                if failed.is_none() {
                    if let Err(e) = writeln!(sink, "{}", r.to_json_line()) {
                        failed = Some(e);
                    }
                }
            })?;
            let target = path.unwrap_or_else(|| PathBuf::from("-"));
            if let Some(e) = failed {
                return Err(io_error(&target, e));
            }
            sink.flush().map_err(|e| io_error(&target, e))?;
        }
        Command::Summarize { records } => {
            let parsed = parse_records(&read_input(&records)?)
                .map_err(|e| CliError::Input(format!("{}: {e}", records.display())))?;
            let _ = out.write_all(summarize(&parsed)?.to_table().as_bytes());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
