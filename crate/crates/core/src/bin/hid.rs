//! `hid` — command-line front end for the harmonic-identity verification
//! engine.
//!
//! Exit codes: 0 on success, 1 when any verification comparison fails,
//! 2 on usage errors. Pole and constraint skips never affect the exit code.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hid_core::rational::Rational;
use hid_core::registry::{evaluate_identity, ParamKind, ParamValue, Registry, Verdict};
use hid_core::report::VerificationReport;
use hid_core::scalar::EvalOutcome;
use hid_core::sweep::{
    corollary_grid, lemma_sweep, sweep, verify_derivative_chain, verify_limits, ChainConfig,
    IdSelection, LemmaConfig, LimitConfig, SweepConfig,
};

#[derive(Parser)]
#[command(
    name = "hid",
    version,
    about = "Exact verifier for harmonic-number summation identities",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the identity registry (id, parameters, constraints, anchor).
    List,
    /// Evaluate one identity at explicit parameters, exactly.
    Eval {
        /// Registry id, e.g. T3.
        #[arg(long)]
        id: String,
        /// Parameter assignment name=value; repeat per parameter.
        /// Rationals use the p/q text form.
        #[arg(long = "param", value_name = "NAME=VALUE")]
        params: Vec<String>,
    },
    /// Run a seeded randomized sweep over registry identities.
    Verify {
        /// Identity id to sweep; repeatable.
        #[arg(long = "id", value_name = "ID", conflicts_with = "all")]
        ids: Vec<String>,
        /// Sweep every registry entry.
        #[arg(long)]
        all: bool,
        /// Samples per identity.
        #[arg(long, default_value_t = 200)]
        samples: u64,
        /// Sweep seed (HID_SEED overrides the default).
        #[arg(long, env = "HID_SEED", default_value_t = 42)]
        seed: u64,
        /// Largest summation bound n to sample.
        #[arg(long = "max-n", default_value_t = 6)]
        max_n: u64,
        /// Report format.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Also write the report (same bytes as stdout) to this path.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Exhaustive integer grid bound for corollaries instead of random
        /// sampling (runs C1..C10 plus consistency replays).
        #[arg(long, value_name = "P_MAX", conflicts_with_all = ["ids", "all"])]
        grid: Option<u64>,
    },
    /// Check the product rule for products of linear fractional factors.
    Lemma {
        /// Largest number of factors per product.
        #[arg(long = "s-max", default_value_t = 5)]
        s_max: u64,
        /// Number of random instances.
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, env = "HID_SEED", default_value_t = 42)]
        seed: u64,
    },
    /// Certify the limit steps joining pre-limit identities to theorems.
    Limits {
        #[arg(long, default_value_t = 50)]
        samples: u64,
        #[arg(long, env = "HID_SEED", default_value_t = 42)]
        seed: u64,
        /// Jet expansion order for limit extraction.
        #[arg(long, default_value_t = 5)]
        order: usize,
    },
    /// Certify the derivative transport between theorems (and D1, D2).
    Chain {
        #[arg(long, default_value_t = 50)]
        samples: u64,
        #[arg(long, env = "HID_SEED", default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let registry = Registry::standard();
    match run(cli.command, &registry) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, registry: &Registry) -> Result<ExitCode, String> {
    match command {
        Command::List => {
            print!("{}", render_list(registry));
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { id, params } => run_eval(registry, &id, &params),
        Command::Verify { ids, all, samples, seed, max_n, format, out, grid } => {
            let report = if let Some(p_max) = grid {
                corollary_grid(registry, p_max)
            } else {
                let identity_ids = if all {
                    IdSelection::All
                } else if ids.is_empty() {
                    return Err("pass --all or at least one --id".into());
                } else {
                    IdSelection::Ids(ids)
                };
                let cfg = SweepConfig {
                    identity_ids,
                    samples_per_identity: samples,
                    seed,
                    max_n,
                    rational_height_bound: 12,
                };
                sweep(registry, &cfg).map_err(|e| e.to_string())?
            };
            emit_report(&report, format, out.as_deref())
        }
        Command::Lemma { s_max, trials, seed } => {
            let report = lemma_sweep(&LemmaConfig {
                seed,
                s_max,
                trials,
                ..LemmaConfig::default()
            });
            emit_report(&report, Format::Text, None)
        }
        Command::Limits { samples, seed, order } => {
            let report = verify_limits(&LimitConfig {
                seed,
                samples,
                expansion_order: order,
                ..LimitConfig::default()
            });
            emit_report(&report, Format::Text, None)
        }
        Command::Chain { samples, seed } => {
            let report = verify_derivative_chain(
                registry,
                &ChainConfig {
                    seed,
                    samples,
                    d1_points: samples,
                    d2_samples: 4 * samples,
                    ..ChainConfig::default()
                },
            );
            emit_report(&report, Format::Text, None)
        }
    }
}

fn render_list(registry: &Registry) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<5} {:<32} {:<22} anchor\n",
        "id", "params", "constraints"
    ));
    for spec in registry.entries() {
        let params: Vec<String> = spec
            .params
            .iter()
            .map(|p| format!("{}: {}", p.name, p.kind.describe()))
            .collect();
        out.push_str(&format!(
            "{:<5} {:<32} {:<22} {}\n",
            spec.id,
            params.join(", "),
            spec.constraints,
            spec.anchor
        ));
    }
    out
}

fn run_eval(registry: &Registry, id: &str, raw_params: &[String]) -> Result<ExitCode, String> {
    let spec = registry
        .lookup(id)
        .ok_or_else(|| format!("unknown identity id: {id}"))?;
    let mut params = Vec::new();
    for raw in raw_params {
        let (name, value_text) = raw
            .split_once('=')
            .ok_or_else(|| format!("--param must be NAME=VALUE, got {raw:?}"))?;
        let kind = spec
            .params
            .iter()
            .find(|p| p.name == name)
            .map(|p| p.kind)
            .ok_or_else(|| format!("{id} has no parameter `{name}`"))?;
        let value = match kind {
            ParamKind::NonNegInt | ParamKind::PosInt => value_text
                .parse::<u64>()
                .map(ParamValue::Nat)
                .map_err(|_| format!("parameter `{name}` must be a nonnegative integer"))?,
            ParamKind::Rational => value_text
                .parse::<Rational>()
                .map(ParamValue::Rat)
                .map_err(|e| format!("parameter `{name}`: {e}"))?,
        };
        params.push((name.to_string(), value));
    }
    let evaluation = evaluate_identity(registry, id, &params).map_err(|e| e.to_string())?;

    println!("id: {} — {}", spec.id, spec.anchor);
    let rendered: Vec<String> = params.iter().map(|(n, v)| format!("{n}={}", v.render())).collect();
    println!("params: {}", rendered.join(" "));
    match evaluation.verdict {
        Verdict::ConstraintViolation => {
            println!("verdict: constraint-violation ({})", spec.constraints);
            Ok(ExitCode::SUCCESS)
        }
        verdict => {
            println!("lhs = {}", render_outcome(evaluation.lhs.as_ref()));
            println!("rhs = {}", render_outcome(evaluation.rhs.as_ref()));
            println!("verdict: {}", verdict.as_str());
            if verdict == Verdict::Unequal {
                Ok(ExitCode::FAILURE)
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}

fn render_outcome(outcome: Option<&EvalOutcome>) -> String {
    match outcome {
        None => "-".to_string(),
        Some(EvalOutcome::Pole(p)) => p.to_string(),
        Some(EvalOutcome::Value(v)) => match v.to_f64() {
            Some(approx) => format!("{v} (≈ {approx})"),
            None => v.to_string(),
        },
    }
}

fn emit_report(
    report: &VerificationReport,
    format: Format,
    out: Option<&std::path::Path>,
) -> Result<ExitCode, String> {
    let rendered = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    print!("{rendered}");
    if let Some(path) = out {
        let mut file = std::fs::File::create(path)
            .map_err(|e| format!("cannot create {}: {e}", path.display()))?;
        file.write_all(rendered.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    if report.total_failures() > 0 {
        Ok(ExitCode::FAILURE)
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
