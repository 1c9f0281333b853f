//! `twcert`: build, check and cross-examine choosability certificates from the
//! command line. Results go to stdout (or `--output`) as JSON; failures go to
//! stderr as `{"error": code, "message": ...}`.
//!
//! Exit status: 0 success or accepted, 1 rejected or nothing found, 2 usage or
//! input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use twcert::cover::{certify_with_limit, gadget_family, odd_clique_family, CertifyMode, PathFamily};
use twcert::decompose::{h_decompose_with_limit, odd_clique_decompose_with_limit, triangle_decompose_with_limit};
use twcert::graph::{h_graph, Edge, EdgeMap, Graph};
use twcert::matrix::{coe_via_permanent_with_limit, permanent_with_limit, IntMatrix};
use twcert::oracle::{
    cn_check_with_limits, find_sufficient_with_limit, solve_list_with_limit, ListAssignment, OracleError,
    TotalExponents,
};
use twcert::pipeline::{run_pipeline, PipelineConfig, Target};
use twcert::Error;

#[derive(Parser)]
#[command(name = "twcert", version, about = "Exact certificates for total-weighting choosability")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// No progress messages on stderr.
    #[arg(long, global = true)]
    quiet: bool,
    /// Largest permanent side attempted.
    #[arg(long, global = true, default_value_t = twcert::matrix::DEFAULT_PERMANENT_LIMIT)]
    max_permanent: usize,
    /// Largest list grid searched.
    #[arg(long, global = true, default_value_t = twcert::oracle::DEFAULT_MAX_GRID)]
    max_grid: u64,
    /// Largest edge count handed to the decomposer.
    #[arg(long, global = true, default_value_t = twcert::decompose::DEFAULT_MAX_EDGES)]
    max_edges: usize,
    /// Largest edge count expanded symbolically.
    #[arg(long, global = true, default_value_t = twcert::cover::DEFAULT_SYMBOLIC_EDGE_LIMIT)]
    max_symbolic: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Structural,
    Symbolic,
    Auto,
}

impl From<Mode> for CertifyMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Structural => CertifyMode::Structural,
            Mode::Symbolic => CertifyMode::Symbolic,
            Mode::Auto => CertifyMode::Auto,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Split {
    Triangles,
    OddCliques,
    H,
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineSplit {
    OddCliques,
    H,
}

#[derive(Subcommand)]
enum Command {
    /// Build and certify the midpoint family of K_n (n odd).
    Cover {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 2)]
        b: u32,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// Emit the 5-vertex gadget with its certificate.
    GadgetH {
        #[arg(long, default_value_t = 3)]
        b: u32,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// Certify a path family supplied as a file.
    Certify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        b: u32,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// Edge-decompose a graph.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        into: Split,
    },
    /// Decompose, merge the canonical part families and certify.
    Pipeline {
        #[arg(long)]
        input: PathBuf,
        /// Defaults to 2 for odd cliques and 3 for the gadget.
        #[arg(long)]
        b: Option<u32>,
        #[arg(long, value_enum, default_value_t = PipelineSplit::OddCliques)]
        into: PipelineSplit,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
    },
    /// Coefficient of x^K in the edge polynomial, via a permanent.
    Coe {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "K")]
        k: PathBuf,
    },
    /// Exact permanent of a square integer matrix.
    Permanent {
        #[arg(long)]
        input: PathBuf,
    },
    /// First exponent map with entries at most b and a nonzero coefficient.
    Sufficient {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        b: u32,
    },
    /// First proper total weighting from explicit lists.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lists: PathBuf,
    },
    /// Random list trials sized by an exponent map.
    CnCheck {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "K")]
        k: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Io(PathBuf, std::io::Error),
    Lib(Error),
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Lib(e.into())
    }
}

impl Failure {
    fn report(&self) -> Value {
        match self {
            Failure::Io(path, e) => json!({"error": "io", "message": format!("{}: {e}", path.display())}),
            Failure::Lib(e) => json!({"error": e.code(), "message": e.to_string()}),
        }
    }
}

/// Result body plus whether it counts as a positive outcome.
struct Outcome {
    body: String,
    positive: bool,
}

impl Outcome {
    fn json(v: &Value, positive: bool) -> Self {
        Outcome { body: serde_json::to_string_pretty(v).expect("values serialize"), positive }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(Graph::from_json(&read(path)?)?)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("values serialize")
}

fn edge_map(g: &Graph, values: &[u32]) -> EdgeMap<u32> {
    EdgeMap(g.edges().iter().copied().zip(values.iter().copied()).collect::<Vec<(Edge, u32)>>())
}

struct Ctx {
    quiet: bool,
    max_permanent: usize,
    max_grid: u64,
    max_edges: usize,
    max_symbolic: usize,
}

impl Ctx {
    fn progress(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn certificate(&self, g: &Graph, f: &PathFamily, b: u32, mode: Mode) -> Result<Outcome, Failure> {
        self.progress(format!("certifying {} edges at b={b}", g.edge_count()));
        let cert = certify_with_limit(g, f, b, mode.into(), self.max_symbolic)?;
        Ok(Outcome { body: cert.to_json(), positive: cert.accepted })
    }

    fn run(&self, cmd: Command) -> Result<Outcome, Failure> {
        match cmd {
            Command::Cover { n, b, mode } => {
                let f = odd_clique_family(n)?;
                self.certificate(&f.host().clone(), &f, b, mode)
            }
            Command::GadgetH { b, mode } => {
                let h = h_graph();
                let f = gadget_family(&h, [1, 2, 3, 4, 5])?;
                self.certificate(&h, &f, b, mode)
            }
            Command::Certify { input, family, b, mode } => {
                let g = read_graph(&input)?;
                let f = PathFamily::from_json(&read(&family)?, &g)?;
                self.certificate(&g, &f, b, mode)
            }
            Command::Decompose { input, into } => {
                let g = read_graph(&input)?;
                self.progress(format!("decomposing {} edges", g.edge_count()));
                let d = match into {
                    Split::Triangles => triangle_decompose_with_limit(&g, self.max_edges)?,
                    Split::OddCliques => odd_clique_decompose_with_limit(&g, self.max_edges)?,
                    Split::H => h_decompose_with_limit(&g, self.max_edges)?,
                };
                let found = d.is_some();
                Ok(Outcome::json(&to_value(&d), found))
            }
            Command::Pipeline { input, b, into, mode } => {
                let g = read_graph(&input)?;
                let target = match into {
                    PipelineSplit::OddCliques => Target::OddCliques,
                    PipelineSplit::H => Target::Gadgets,
                };
                let cfg = PipelineConfig {
                    target,
                    bound: b,
                    mode: mode.into(),
                    max_edges: self.max_edges,
                    symbolic_limit: self.max_symbolic,
                };
                self.progress(format!("pipeline on {} edges", g.edge_count()));
                Ok(match run_pipeline(&g, &cfg)? {
                    None => Outcome::json(&json!({"decomposition": null, "certificate": null, "conclusion": "none"}), false),
                    Some(out) => {
                        let cert = out.certificate.to_file();
                        let v = json!({
                            "decomposition": to_value(&out.decomposition),
                            "conclusion": cert.conclusion,
                            "certificate": to_value(&cert),
                        });
                        Outcome::json(&v, out.certificate.accepted)
                    }
                })
            }
            Command::Coe { input, k } => {
                let g = read_graph(&input)?;
                let k = TotalExponents::from_json(&g, &read(&k)?)?;
                if let Some(v) = (0..k.vertices.len()).find(|&v| k.vertices.get(v) > 0) {
                    return Err(OracleError::VertexExponent(v as u32 + 1).into());
                }
                let c = coe_via_permanent_with_limit(&g, &k.edges, self.max_permanent)?;
                let v = json!({"K": to_value(&edge_map(&g, k.edges.values())), "coefficient": c.to_string()});
                Ok(Outcome::json(&v, true))
            }
            Command::Permanent { input } => {
                let m = IntMatrix::from_json(&read(&input)?)?;
                self.progress(format!("permanent of side {}", m.rows()));
                let p = permanent_with_limit(&m, self.max_permanent)?;
                Ok(Outcome::json(&json!({"side": m.rows(), "permanent": p.to_string()}), true))
            }
            Command::Sufficient { input, b } => {
                let g = read_graph(&input)?;
                let k = find_sufficient_with_limit(&g, b, self.max_permanent)?;
                let found = k.is_some();
                let k = k.map(|k| to_value(&edge_map(&g, k.values())));
                Ok(Outcome::json(&json!({"b": b, "K": k}), found))
            }
            Command::Solve { input, lists } => {
                let g = read_graph(&input)?;
                let lists = ListAssignment::from_json(&g, &read(&lists)?)?;
                let w = solve_list_with_limit(&g, &lists, self.max_grid)?;
                let found = w.is_some();
                let w = w.map(|w| to_value(&w.to_file(&g)));
                Ok(Outcome::json(&json!({"weighting": w}), found))
            }
            Command::CnCheck { input, k, trials, seed } => {
                let g = read_graph(&input)?;
                let k = TotalExponents::from_json(&g, &read(&k)?)?;
                self.progress(format!("{trials} trials, seed {seed}"));
                let report = cn_check_with_limits(&g, &k, trials, seed, self.max_grid, self.max_permanent)?;
                Ok(Outcome { body: report.to_json(), positive: report.failures == 0 })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        quiet: cli.quiet,
        max_permanent: cli.max_permanent,
        max_grid: cli.max_grid,
        max_edges: cli.max_edges,
        max_symbolic: cli.max_symbolic,
    };
    let outcome = match ctx.run(cli.command) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("{}", f.report());
            return ExitCode::from(2);
        }
    };
    let mut body = outcome.body;
    body.push('\n');
    let written = match &cli.output {
        Some(path) => fs::write(path, &body).map_err(|e| Failure::Io(path.clone(), e)),
        None => {
            print!("{body}");
            Ok(())
        }
    };
    if let Err(f) = written {
        eprintln!("{}", f.report());
        return ExitCode::from(2);
    }
    ExitCode::from(if outcome.positive { 0 } else { 1 })
}
