use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ydiag::calculus::{criterion_check, del_z, FormalSum, SumJson, CRITERION_NOTE};
use ydiag::characters::normalized_sigma;
use ydiag::conjecture::{conjecture_scan, ScanConfig, ScanMode, DEFAULT_EDGE_BOUND};
use ydiag::decomposition::{decomposition_identity_check, default_train_test, fit_s_basis, interpolate_in_z};
use ydiag::embedding::{count_embeddings, decorated_value, embedding_volume, mc_volume};
use ydiag::functionals::{s_k_partition, s_k_profile, SPolynomialJson};
use ydiag::graph::{BipartiteGraph, DecoratedGraph, GraphJson};
use ydiag::maps::{character_maps, enumerate_gluings, DEFAULT_SIZE_BOUND};
use ydiag::profile::ProfileJson;
use ydiag::rational::{format_q, parse_q};
use ydiag::{Error, Partition, Profile};

#[derive(Parser)]
#[command(name = "ydiag", version, about = "Polynomial functions on Young diagrams via graph embeddings")]
struct Cli {
    /// Worker threads (default: all cores); results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ShapeArgs {
    /// Partition such as `4,3,1`.
    #[arg(long, conflicts_with_all = ["profile", "profile_file"])]
    partition: Option<Partition>,
    /// Inline profile `z,w;z,w;...` with rational entries.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "profile_file")]
    profile: Option<String>,
    /// Profile JSON file `{"breakpoints": [["z","w"], ...]}`.
    #[arg(long)]
    profile_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate S_k on a partition or profile.
    Functional {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        k: u32,
    },
    /// Count (partition) or measure (profile) compatible colorings of a graph.
    Embed {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        shape: ShapeArgs,
        /// Decorated edge `w,b`; requires --z and a strict profile.
        #[arg(long)]
        decorated: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
    },
    /// Run the polynomiality criterion on a formal sum.
    CheckPoly {
        #[arg(long)]
        sum: PathBuf,
    },
    /// Fit an S-polynomial and check the z-decomposition identity.
    Decompose {
        #[arg(long)]
        sum: PathBuf,
        /// Strict profile for the identity check.
        #[arg(long, allow_hyphen_values = true, default_value = "-2,2;0,3;3,3")]
        profile: String,
    },
    /// Normalized character from maps or the Murnaghan–Nakayama rule.
    Character {
        #[arg(long)]
        mu: Partition,
        #[arg(long)]
        lambda: Partition,
        #[arg(long, default_value_t = 1)]
        alpha: u32,
        #[arg(long, value_enum, default_value_t = Method::Maps)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_SIZE_BOUND)]
        max_size: usize,
    },
    /// Enumerate polygon gluings of face type mu.
    Maps {
        #[arg(long)]
        mu: Partition,
        #[arg(long)]
        list: bool,
        #[arg(long, default_value_t = DEFAULT_SIZE_BOUND)]
        max_size: usize,
    },
    /// Search small formal sums for violations of the higher criterion conditions.
    ConjectureScan {
        #[arg(long, default_value_t = 3)]
        max_edges: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_EDGE_BOUND)]
        edge_bound: usize,
    },
    /// Monte Carlo volume estimate.
    Mc {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Maps,
    Mn,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

type CliResult<T> = std::result::Result<T, Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command, cli.threads) {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::ResourceBound(_) => 3,
                Error::Overflow(_) | Error::Calibration(_) => 1,
                _ => 2,
            })
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn read_graph(path: &Path) -> CliResult<BipartiteGraph> {
    BipartiteGraph::try_from(&read_json::<GraphJson>(path)?)
}

fn read_sum(path: &Path) -> CliResult<FormalSum<BipartiteGraph>> {
    FormalSum::try_from(&read_json::<SumJson>(path)?)
}

enum Shape {
    Partition(Partition),
    Profile(Profile),
}

impl ShapeArgs {
    fn resolve(&self) -> CliResult<Shape> {
        match (&self.partition, &self.profile, &self.profile_file) {
            (Some(p), None, None) => Ok(Shape::Partition(p.clone())),
            (None, Some(s), None) => Ok(Shape::Profile(s.parse()?)),
            (None, None, Some(f)) => Ok(Shape::Profile(Profile::try_from(read_json::<ProfileJson>(f)?)?)),
            _ => Err(Error::InvalidArgument(
                "give exactly one of --partition, --profile, --profile-file".into(),
            )),
        }
    }
}

fn shape_config(shape: &Shape) -> Value {
    match shape {
        Shape::Partition(p) => json!({ "partition": p.to_string() }),
        Shape::Profile(w) => json!({ "profile": ProfileJson::from(w) }),
    }
}

fn parse_pair(s: &str) -> CliResult<(usize, usize)> {
    let bad = || Error::InvalidArgument(format!("expected `w,b`, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn run(command: Command, threads: Option<usize>) -> CliResult<Value> {
    match command {
        Command::Functional { shape, k } => {
            let shape = shape.resolve()?;
            let value = match &shape {
                Shape::Partition(p) => s_k_partition(p, k)?,
                Shape::Profile(w) => s_k_profile(w, k)?,
            };
            Ok(json!({ "value": format_q(&value), "config": { "k": k, "shape": shape_config(&shape) } }))
        }
        Command::Embed { graph, shape, decorated, z } => {
            let g = read_graph(&graph)?;
            let shape = shape.resolve()?;
            let config = json!({ "graph": GraphJson::from(&g), "shape": shape_config(&shape) });
            match (decorated, z, &shape) {
                (None, None, Shape::Partition(p)) => {
                    Ok(json!({ "count": count_embeddings(&g, p)?.to_string(), "config": config }))
                }
                (None, None, Shape::Profile(w)) => {
                    Ok(json!({ "volume": format_q(&embedding_volume(&g, w)?), "config": config }))
                }
                (Some(e), Some(z), Shape::Profile(w)) => {
                    let d = DecoratedGraph::new(g, parse_pair(&e)?)?;
                    let z = parse_q(&z)?;
                    Ok(json!({ "value": format_q(&decorated_value(&d, w, &z)?), "config": config }))
                }
                _ => Err(Error::InvalidArgument(
                    "--decorated and --z go together and need a profile".into(),
                )),
            }
        }
        Command::CheckPoly { sum } => {
            let s = read_sum(&sum)?;
            Ok(criterion_json(&s))
        }
        Command::Decompose { sum, profile } => {
            let s = read_sum(&sum)?;
            let omega: Profile = profile.parse()?;
            let (train, test) = default_train_test(&s);
            let fit = fit_s_basis(&s, &train, &test)?;
            let identity = match decomposition_identity_check(&s, &omega) {
                Ok(r) => serde_json::to_value(&r)?,
                Err(e @ (Error::InvalidArgument(_) | Error::NotForest)) => json!({ "skipped": e.to_string() }),
                Err(e) => return Err(e),
            };
            let interp = interpolate_in_z(&del_z(&s), &omega).ok();
            Ok(json!({
                "s_polynomial": if fit.feasible { json!(SPolynomialJson::from(&fit.polynomial)) } else { json!("infeasible") },
                "criterion": criterion_json(&s),
                "identity_check": identity,
                "z_polynomial": interp.map(|i| json!({
                    "coeffs": i.coeffs.iter().map(format_q).collect::<Vec<_>>(),
                    "is_polynomial": i.is_polynomial,
                    "witness": i.witness.as_ref().map(format_q),
                })),
                "train_rank": fit.train_rank,
                "unknowns": fit.unknowns,
                "train_residuals": fit.train_residuals,
                "test_residuals": fit.test_residuals,
                "config": {
                    "profile": ProfileJson::from(&omega),
                    "train_size": train.len(),
                    "test_size": test.len(),
                },
            }))
        }
        Command::Character { mu, lambda, alpha, method, max_size } => {
            let config = json!({
                "mu": mu.to_string(), "lambda": lambda.to_string(), "alpha": alpha,
                "max_size": max_size, "map_class": if alpha == 1 { "oriented" } else { "all" },
            });
            let mn = || -> CliResult<String> {
                if alpha != 1 {
                    return Err(Error::InvalidArgument("the character oracle exists for alpha = 1 only".into()));
                }
                Ok(format_q(&normalized_sigma(&mu, &lambda)))
            };
            match method {
                Method::Mn => Ok(json!({ "value": mn()?, "config": config })),
                Method::Maps | Method::Both => {
                    let v = character_maps(&mu, &lambda, alpha, max_size)?;
                    let mut out = json!({
                        "value": format_q(&v.value),
                        "raw_sum": format_q(&v.raw_sum),
                        "calibration": if v.calibration == 1 { "+1" } else { "-1" },
                        "maps_enumerated": v.maps_enumerated,
                        "config": config,
                    });
                    if let Method::Both = method {
                        let oracle = mn()?;
                        out["agree"] = json!(oracle == out["value"]);
                        out["mn_value"] = json!(oracle);
                    }
                    Ok(out)
                }
            }
        }
        Command::Maps { mu, list, max_size } => {
            let maps = enumerate_gluings(&mu, max_size)?;
            let orientable = maps.iter().filter(|m| m.orientable).count();
            let oriented = maps.iter().filter(|m| m.oriented).count();
            let mut out = json!({
                "count": maps.len(),
                "orientable": orientable,
                "oriented": oriented,
                "config": { "mu": mu.to_string(), "max_size": max_size },
            });
            if list {
                out["maps"] = maps
                    .iter()
                    .map(|m| {
                        json!({
                            "pairing": m.pairing,
                            "white_vertices": m.white_vertices,
                            "black_vertices": m.black_vertices,
                            "euler_characteristic": m.euler_characteristic,
                            "orientable": m.orientable,
                            "oriented": m.oriented,
                            "graph": GraphJson::from(&m.underlying),
                        })
                    })
                    .collect();
            }
            Ok(out)
        }
        Command::ConjectureScan { max_edges, mode, trials, seed, edge_bound } => {
            let config = ScanConfig {
                max_edges,
                mode: match mode {
                    Mode::Exhaustive => ScanMode::Exhaustive,
                    Mode::Random => ScanMode::Random,
                },
                trials,
                seed,
                edge_bound,
            };
            let report = conjecture_scan(&config)?;
            let mut out = serde_json::to_value(&report)?;
            out["config"] = json!({ "max_edges": max_edges, "trials": trials, "seed": seed, "edge_bound": edge_bound });
            Ok(out)
        }
        Command::Mc { graph, shape, samples, seed } => {
            let g = read_graph(&graph)?;
            let shape = shape.resolve()?;
            let omega = match &shape {
                Shape::Partition(p) => Profile::of_partition(p),
                Shape::Profile(w) => w.clone(),
            };
            let est = mc_volume(&g, &omega, samples, seed)?;
            let mut out = serde_json::to_value(&est)?;
            out["config"] = json!({
                "graph": GraphJson::from(&g),
                "shape": shape_config(&shape),
                "threads": threads,
            });
            Ok(out)
        }
    }
}

fn criterion_json(s: &FormalSum<BipartiteGraph>) -> Value {
    let report = criterion_check(s);
    let residuals: serde_json::Map<String, Value> = report
        .residuals
        .iter()
        .map(|(k, r)| (k.to_string(), json!(SumJson::from(r))))
        .collect();
    json!({
        "verdict": if report.pass { "pass" } else { "fail" },
        "residuals": residuals,
        "k_max": report.k_max,
        "note": CRITERION_NOTE,
        "config": { "terms": s.len(), "max_edges": s.max_edges() },
    })
}
