//! JSON-in, JSON-out front end for the corecompact library.
//!
//! Every subcommand reads its sets, spaces, and sequences from JSON files,
//! writes one schema-tagged JSON document to standard output, and reserves
//! standard error for diagnostics. Exit codes: 0 success, 2 usage, 3 a
//! negative verdict (a refuted relation, a non-open family, a failed law),
//! 4 a domain or input error. Identical arguments and seed produce
//! byte-identical output; WAYBELOW_SEED overrides the configured seed.

use clap::{Parser, Subcommand};
use corecompact::colimit::{
    build_chain, check_open_at, AscendingSequence, ColimitOpen,
};
use corecompact::interpolation::interpolate_with;
use corecompact::properties::{run_laws, RunConfig};
use corecompact::waybelow::oracle::oracle_way_below_report;
use corecompact::{hamcke_report, way_below, BoxUnion, InterpolationError, PointQ, Space};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "corecompact", version, about = "Exact way-below decisions, interpolation, and colimit chains over rational boxes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether S is way below T, with a certificate or refutation.
    Waybelow {
        /// Ambient space JSON file
        #[arg(long)]
        space: PathBuf,
        /// Source set JSON file
        #[arg(long)]
        s: PathBuf,
        /// Target set JSON file
        #[arg(long)]
        t: PathBuf,
        /// Also run the cover-enumeration oracle with this budget
        #[arg(long)]
        oracle_budget: Option<usize>,
    },
    /// Strengthen S x T way below W into open factors U_S x V_T.
    Interpolate {
        #[arg(long)]
        x_space: PathBuf,
        #[arg(long)]
        y_space: PathBuf,
        #[arg(long)]
        s: PathBuf,
        #[arg(long)]
        t: PathBuf,
        #[arg(long)]
        w: PathBuf,
        /// Grid refinement rounds to attempt
        #[arg(long, default_value_t = 4)]
        max_refine: u32,
    },
    /// Build the ascending chain witness through two stage sequences.
    Chain {
        #[arg(long)]
        seq_x: PathBuf,
        #[arg(long)]
        seq_y: PathBuf,
        /// Colimit open on the product sequence
        #[arg(long)]
        w: PathBuf,
        /// JSON file {"x":{"coords":[...]},"y":{"coords":[...]}}
        #[arg(long)]
        point: PathBuf,
        #[arg(long)]
        depth: u64,
    },
    /// Check the openness criterion of a stage family up to a stage.
    CheckOpen {
        #[arg(long)]
        seq: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        upto: u64,
    },
    /// Witness generators for the spaces where the guarantees fail.
    Counterexample {
        #[command(subcommand)]
        which: CounterexampleCommand,
    },
    /// Run the randomized law battery and report per-law results.
    Properties {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long)]
        depth: Option<u64>,
        #[arg(long)]
        oracle_budget: Option<usize>,
        /// Restrict the run to named laws (repeatable)
        #[arg(long = "law")]
        laws: Vec<String>,
    },
}

#[derive(Subcommand)]
enum CounterexampleCommand {
    /// Wedge-of-circles separations and product-limit witnesses.
    Hamcke {
        #[arg(long)]
        kmax: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(4)
        }
    }
}

fn load<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {what} from {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid {what} in {}: {e}", path.display()))
}

fn emit(value: &Value) {
    println!("{value}");
}

#[derive(Deserialize)]
struct PointPair {
    x: PointQ,
    y: PointQ,
}

const OK: ExitCode = ExitCode::SUCCESS;

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Waybelow {
            space,
            s,
            t,
            oracle_budget,
        } => {
            let space: Space = load(&space, "space")?;
            let s: BoxUnion = load(&s, "source set")?;
            let t: BoxUnion = load(&t, "target set")?;
            let verdict = way_below(&space, &s, &t).map_err(|e| e.to_string())?;
            let mut doc = serde_json::to_value(&verdict).map_err(|e| e.to_string())?;
            doc["schema"] = json!("waybelow/1");
            if let Some(budget) = oracle_budget {
                let oracle =
                    oracle_way_below_report(&space, &s, &t, budget).map_err(|e| e.to_string())?;
                doc["oracle"] = serde_json::to_value(&oracle).map_err(|e| e.to_string())?;
            }
            emit(&doc);
            Ok(if verdict.holds { OK } else { ExitCode::from(3) })
        }
        Command::Interpolate {
            x_space,
            y_space,
            s,
            t,
            w,
            max_refine,
        } => {
            let x: Space = load(&x_space, "x space")?;
            let y: Space = load(&y_space, "y space")?;
            let s: BoxUnion = load(&s, "source set")?;
            let t: BoxUnion = load(&t, "target set")?;
            let w: BoxUnion = load(&w, "ambient open")?;
            match interpolate_with(&x, &y, &s, &t, &w, max_refine) {
                Ok(out) => {
                    let mut doc = serde_json::to_value(&out).map_err(|e| e.to_string())?;
                    doc["schema"] = json!("interpolate/1");
                    emit(&doc);
                    Ok(OK)
                }
                Err(InterpolationError::PreconditionFailed { refutation }) => {
                    let doc = json!({
                        "schema": "interpolate/1",
                        "holds": false,
                        "refutation": refutation,
                    });
                    emit(&doc);
                    Ok(ExitCode::from(3))
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Chain {
            seq_x,
            seq_y,
            w,
            point,
            depth,
        } => {
            let sx: AscendingSequence = load(&seq_x, "x sequence")?;
            let sy: AscendingSequence = load(&seq_y, "y sequence")?;
            let w: ColimitOpen = load(&w, "colimit open")?;
            let point: PointPair = load(&point, "point pair")?;
            let witness = build_chain(&sx, &sy, &w, &point.x, &point.y, depth)
                .map_err(|e| e.to_string())?;
            let mut doc = serde_json::to_value(&witness).map_err(|e| e.to_string())?;
            doc["schema"] = json!("chain/1");
            emit(&doc);
            Ok(OK)
        }
        Command::CheckOpen { seq, family, upto } => {
            let seq: AscendingSequence = load(&seq, "sequence")?;
            let family: ColimitOpen = load(&family, "family")?;
            let open = check_open_at(&seq, &family, upto).map_err(|e| e.to_string())?;
            emit(&json!({ "schema": "check-open/1", "upto": upto, "open": open }));
            Ok(if open { OK } else { ExitCode::from(3) })
        }
        Command::Counterexample {
            which: CounterexampleCommand::Hamcke { kmax },
        } => {
            let report = hamcke_report(kmax).map_err(|e| e.to_string())?;
            emit(&serde_json::to_value(&report).map_err(|e| e.to_string())?);
            Ok(OK)
        }
        Command::Properties {
            seed,
            cases,
            depth,
            oracle_budget,
            laws,
        } => {
            let defaults = RunConfig::default();
            let mut cfg = RunConfig {
                seed: seed.unwrap_or(defaults.seed),
                case_count: cases.unwrap_or(defaults.case_count),
                depth: depth.unwrap_or(defaults.depth),
                oracle_budget: oracle_budget.unwrap_or(defaults.oracle_budget),
            };
            if let Ok(env_seed) = std::env::var("WAYBELOW_SEED") {
                cfg.seed = env_seed
                    .parse()
                    .map_err(|e| format!("WAYBELOW_SEED must be an integer: {e}"))?;
            }
            let filter: Vec<&str> = laws.iter().map(String::as_str).collect();
            let report = run_laws(&cfg, if filter.is_empty() { None } else { Some(&filter) });
            for law in &report.laws {
                eprintln!(
                    "{} {} ({} cases)",
                    if law.passed { "pass" } else { "FAIL" },
                    law.name,
                    law.cases
                );
            }
            emit(&serde_json::to_value(&report).map_err(|e| e.to_string())?);
            Ok(if report.all_passed {
                OK
            } else {
                ExitCode::from(3)
            })
        }
    }
}
