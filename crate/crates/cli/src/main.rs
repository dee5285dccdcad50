//! Command-line driver: exact-JSON reports on stdout, timing on stderr,
//! exit code 0 on success, 2 on a precondition violation, 3 on budget
//! exhaustion.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use shamoduli::chow::{
    all_mvectors, component_coefficient, oracle_coefficient, DualConfig, MVector,
};
use shamoduli::linalg::rank;
use shamoduli::projgeom::{
    generic_base_params, h_locus_equations, IndexSet, SCoordinates,
};
use shamoduli::rational::{Rat, RatStream};
use shamoduli::sha::{Sha, ShaError};
use shamoduli::weights::{
    adjacent, exclusion_certificate, separating_walls, walls_between, BaseWeight, WallKind,
    WeightVector,
};
use shamoduli::wonderful::{
    blow_up_sequence, building_set, strata, stratum_poset_dot, WonderfulError,
};

#[derive(Parser)]
#[command(
    name = "shamoduli",
    about = "Exact computations for moduli of line arrangements with a fixed restriction",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Loci destabilized by a weight, with counts per codimension.
    BuildingSet {
        #[arg(long)]
        n: usize,
        /// Comma-separated rationals; defaults to the standard base weight.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Realizable boundary-stratum labels, up to a depth.
    Strata {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        weights: Option<String>,
        /// Maximum number of degenerations; defaults to n.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The building set in blow-up order (decreasing set size, then lex).
    BlowupOrder {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Replace a destabilized multiple point by a new component.
    StableReplace {
        /// Surface JSON file.
        #[arg(long)]
        sha: PathBuf,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        /// Lines through the point, e.g. 1,2,3,4.
        #[arg(long)]
        set: String,
        /// Moduli of the new component, |set|-2 rationals, e.g. 1,0.
        #[arg(long)]
        moduli: String,
    },
    /// Rooted dual graph of a surface.
    DualGraph {
        #[arg(long)]
        sha: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Configuration-cycle coefficients of a surface.
    CycleClass {
        #[arg(long)]
        sha: PathBuf,
        /// Single multiplicity vector, e.g. 1,1,1,0,0; all vectors if absent.
        #[arg(long)]
        m: Option<String>,
        /// Cross-check each coefficient against the linear-system oracle.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for the per-vector loop.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Infeasibility certificate for destabilizing every triple at once.
    Exclusion {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Seeded checks of the universal-family coordinate identities.
    FamilyCheck {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Walls of the weight domain; with --weights and --target, the walls
    /// separating two weights.
    Walls {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        target: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Equations, rank, and dimension of a concurrency locus.
    HLocus {
        #[arg(long)]
        n: usize,
        /// Lines required to concur, e.g. 1,2,3.
        #[arg(long)]
        set: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    command: String,
    seed: Option<u64>,
    result: T,
    certificates: Vec<String>,
}

fn emit<T: Serialize>(result: T, seed: Option<u64>, certificates: Vec<String>) -> Result<()> {
    let report = Report {
        command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
        seed,
        result,
        certificates,
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("SHAMODULI_SEED")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(0)
}

fn parse_rats(text: &str) -> Result<Vec<Rat>> {
    text.split(',')
        .map(|t| Rat::from_str(t).map_err(|e| anyhow!("{e}")))
        .collect()
}

fn parse_weights(text: Option<&str>, n: usize) -> Result<WeightVector> {
    match text {
        None => Ok(BaseWeight::standard(n).vector().clone()),
        Some(t) => {
            let v = parse_rats(t)?;
            if v.len() != n {
                bail!("expected {n} weights, got {}", v.len());
            }
            Ok(WeightVector::new(v)?)
        }
    }
}

fn parse_set(text: &str, n: usize) -> Result<IndexSet> {
    let elems = text
        .split(',')
        .map(|t| t.trim().parse::<usize>().context("bad index"))
        .collect::<Result<Vec<_>>>()?;
    Ok(IndexSet::checked(elems, n)?)
}

fn parse_mvector(text: &str) -> Result<MVector> {
    let entries = text
        .split(',')
        .map(|t| t.trim().parse::<u8>().context("bad multiplicity"))
        .collect::<Result<Vec<_>>>()?;
    Ok(MVector::new(entries)?)
}

fn load_sha(path: &PathBuf) -> Result<Sha> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    Ok(Sha::from_json_str(&text)?)
}

fn no_dot(format: Format) -> Result<()> {
    if format == Format::Dot {
        bail!("this command has no DOT rendering");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::BuildingSet { n, weights, format } => {
            no_dot(format)?;
            let w = parse_weights(weights.as_deref(), n)?;
            let elements = building_set(&w);
            let mut by_codim = std::collections::BTreeMap::new();
            for e in &elements {
                *by_codim.entry(e.codim).or_insert(0usize) += 1;
            }
            match format {
                Format::Text => {
                    for e in &elements {
                        println!("I={} codim={}", e.set, e.codim);
                    }
                    println!("total={}", elements.len());
                }
                _ => emit(
                    serde_json::json!({
                        "n": n,
                        "count": elements.len(),
                        "by_codim": by_codim,
                        "elements": elements,
                    }),
                    None,
                    vec!["weights validated".into()],
                )?,
            }
            Ok(())
        }
        Command::Strata {
            n,
            weights,
            depth,
            budget,
            seed,
            format,
        } => {
            let w = parse_weights(weights.as_deref(), n)?;
            let seed = resolve_seed(seed);
            let depth = depth.unwrap_or(n);
            let labels = strata(&w, depth, budget, seed)?;
            match format {
                Format::Dot => print!("{}", stratum_poset_dot(&labels)),
                Format::Text => {
                    for l in &labels {
                        println!("{l}");
                    }
                    println!("total={}", labels.len());
                }
                Format::Json => {
                    let rows: Vec<_> = labels
                        .iter()
                        .map(|l| {
                            serde_json::json!({
                                "factors": l.factors(),
                                "depth": l.depth(),
                                "transversal": l.is_transversal(),
                            })
                        })
                        .collect();
                    emit(
                        serde_json::json!({ "n": n, "count": labels.len(), "strata": rows }),
                        Some(seed),
                        vec!["every label realized by exact construction".into()],
                    )?;
                }
            }
            Ok(())
        }
        Command::BlowupOrder { n, weights, format } => {
            no_dot(format)?;
            let w = parse_weights(weights.as_deref(), n)?;
            let seq = blow_up_sequence(&w);
            match format {
                Format::Text => {
                    for e in &seq {
                        println!("I={} codim={}", e.set, e.codim);
                    }
                }
                _ => emit(
                    serde_json::json!({ "n": n, "count": seq.len(), "order": seq }),
                    None,
                    vec!["order is decreasing set size, lexicographic on ties".into()],
                )?,
            }
            Ok(())
        }
        Command::StableReplace {
            sha,
            vertex,
            set,
            moduli,
        } => {
            let x = load_sha(&sha)?;
            let set = parse_set(&set, x.n())?;
            let mu = SCoordinates::new(parse_rats(&moduli)?)?;
            let replaced = x.stable_replacement(vertex, &set, &mu)?;
            print!("{}", replaced.to_json_string());
            Ok(())
        }
        Command::DualGraph { sha, format } => {
            let x = load_sha(&sha)?;
            let graph = x.dual_graph();
            match format {
                Format::Dot => print!("{}", graph.to_dot()),
                Format::Text => {
                    for node in &graph.nodes {
                        println!("component {} markings {}", node.id, node.markings);
                    }
                    for (a, b) in &graph.edges {
                        println!("edge {a} -- {b}");
                    }
                }
                Format::Json => emit(graph, None, vec!["rooted tree validated".into()])?,
            }
            Ok(())
        }
        Command::CycleClass {
            sha,
            m,
            oracle,
            seed,
            threads,
            format,
        } => {
            no_dot(format)?;
            let x = load_sha(&sha)?;
            let seed = resolve_seed(seed);
            let vectors = match m {
                Some(text) => vec![parse_mvector(&text)?],
                None => all_mvectors(x.n()),
            };
            let configs = if oracle {
                x.components()
                    .iter()
                    .map(|c| DualConfig::from_component(&x, c.id))
                    .collect::<Result<Vec<_>, _>>()?
            } else {
                Vec::new()
            };
            let evaluate = |mv: &MVector| -> Result<serde_json::Value> {
                let mut c = 0u64;
                for comp in x.components() {
                    c += component_coefficient(&x, comp.id, mv)? as u64;
                }
                let mut row = serde_json::json!({ "m": mv, "c": c });
                if oracle {
                    let mut o = 0u64;
                    for config in &configs {
                        o += oracle_coefficient(config, mv, seed)? as u64;
                    }
                    row["oracle"] = serde_json::json!(o);
                }
                Ok(row)
            };
            let rows: Vec<serde_json::Value> = match threads {
                Some(k) if k > 1 => {
                    use rayon::prelude::*;
                    let pool = rayon::ThreadPoolBuilder::new()
                        .num_threads(k)
                        .build()
                        .context("cannot build thread pool")?;
                    pool.install(|| {
                        vectors
                            .par_iter()
                            .map(|mv| evaluate(mv))
                            .collect::<Result<Vec<_>>>()
                    })?
                }
                _ => vectors
                    .iter()
                    .map(evaluate)
                    .collect::<Result<Vec<_>>>()?,
            };
            match format {
                Format::Text => {
                    for row in &rows {
                        println!("{row}");
                    }
                }
                _ => {
                    let mut certificates =
                        vec!["coefficients from the collapsed/concurrent criterion".into()];
                    if oracle {
                        certificates.push(
                            "oracle verdicts are majorities of three seeded generic draws".into(),
                        );
                    }
                    emit(
                        serde_json::json!({ "n": x.n(), "coefficients": rows }),
                        Some(seed),
                        certificates,
                    )?;
                }
            }
            Ok(())
        }
        Command::Exclusion { n, format } => {
            no_dot(format)?;
            let witness = exclusion_certificate(n)?;
            match format {
                Format::Text => {
                    println!(
                        "{} witness triple {{{},{},{}}}",
                        if witness.system_infeasible {
                            "INFEASIBLE"
                        } else {
                            "FEASIBLE"
                        },
                        witness.witness_triple[0],
                        witness.witness_triple[1],
                        witness.witness_triple[2]
                    );
                    println!(
                        "relaxed system {}",
                        if witness.relaxed_feasible {
                            "feasible with unit weights"
                        } else {
                            "infeasible"
                        }
                    );
                }
                _ => emit(
                    witness,
                    None,
                    vec!["verdicts by exact elimination".into()],
                )?,
            }
            Ok(())
        }
        Command::FamilyCheck {
            n,
            trials,
            seed,
            format,
        } => {
            no_dot(format)?;
            let seed = resolve_seed(seed);
            let mut passed = 0usize;
            for trial in 0..trials {
                let trial_seed = seed.wrapping_add(trial as u64);
                let a = generic_base_params(n, trial_seed);
                let mut stream = RatStream::new(trial_seed ^ 0x5851_f42d_4c95_7f2d);
                let s = loop {
                    let v: Vec<Rat> = (0..n - 2).map(|_| stream.rat()).collect();
                    if v.iter().any(|x| !x.is_zero()) {
                        break SCoordinates::new(v)?;
                    }
                };
                let t = [stream.nonzero(), stream.rat(), stream.rat()];
                if shamoduli::projgeom::verify_universal_family(n, &a, &s, &t)? {
                    passed += 1;
                }
            }
            match format {
                Format::Text => println!("{passed}/{trials} identities hold"),
                _ => emit(
                    serde_json::json!({ "n": n, "trials": trials, "passed": passed }),
                    Some(seed),
                    vec!["exact rational evaluation".into()],
                )?,
            }
            Ok(())
        }
        Command::Walls {
            n,
            weights,
            target,
            format,
        } => {
            no_dot(format)?;
            match (weights, target) {
                (Some(w), Some(t)) => {
                    let u = parse_weights(Some(&w), n)?;
                    let v = parse_weights(Some(&t), n)?;
                    let crossed = walls_between(&u, &v)?;
                    let adj = adjacent(&u, &v)?;
                    match format {
                        Format::Text => {
                            for wall in &crossed {
                                println!("{wall:?}");
                            }
                            println!("total={} adjacent={}", crossed.len(), adj.is_some());
                        }
                        _ => emit(
                            serde_json::json!({
                                "n": n,
                                "count": crossed.len(),
                                "adjacent": adj.is_some(),
                                "walls": crossed,
                            }),
                            None,
                            vec!["wall equations evaluated exactly".into()],
                        )?,
                    }
                }
                (None, None) => {
                    let walls = separating_walls(n);
                    let multiple = walls
                        .iter()
                        .filter(|w| w.kind == WallKind::MultiplePoint)
                        .count();
                    let coincidence = walls.len() - multiple;
                    match format {
                        Format::Text => {
                            println!(
                                "total={} multiple_point={multiple} coincidence={coincidence}",
                                walls.len()
                            );
                        }
                        _ => emit(
                            serde_json::json!({
                                "n": n,
                                "count": walls.len(),
                                "multiple_point": multiple,
                                "coincidence": coincidence,
                                "walls": walls,
                            }),
                            None,
                            vec!["separating walls only".into()],
                        )?,
                    }
                }
                _ => bail!("--weights and --target must be given together"),
            }
            Ok(())
        }
        Command::HLocus {
            n,
            set,
            seed,
            format,
        } => {
            no_dot(format)?;
            let seed = resolve_seed(seed);
            let set = parse_set(&set, n)?;
            let a = generic_base_params(n, seed);
            let eqs = h_locus_equations(n, &a, &set)?;
            let r = rank(&eqs, n - 2);
            match format {
                Format::Text => {
                    println!(
                        "I={set} rows={} rank={r} expected_rank={} dim={}",
                        eqs.len(),
                        set.len() - 2,
                        n - set.len() - 1
                    );
                }
                _ => emit(
                    serde_json::json!({
                        "n": n,
                        "I": set,
                        "rows": eqs.len(),
                        "rank": r,
                        "expected_rank": set.len() - 2,
                        "dim": n - set.len() - 1,
                        "equations": eqs,
                    }),
                    Some(seed),
                    vec!["base parameters pairwise distinct, off 0 and 1".into()],
                )?,
            }
            Ok(())
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    if let Some(sha) = err.downcast_ref::<ShaError>() {
        if matches!(sha, ShaError::BudgetExceeded(_)) {
            return 3;
        }
    }
    if let Some(w) = err.downcast_ref::<WonderfulError>() {
        if matches!(w, WonderfulError::Sha(ShaError::BudgetExceeded(_))) {
            return 3;
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let outcome = run(cli);
    eprintln!("time_ms={}", started.elapsed().as_millis());
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
