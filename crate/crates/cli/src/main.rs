//! `ddt`: command-line driver for identity verification and torus experiments.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use config::RunConfig;
use report::{Failure, Report};

#[derive(Parser)]
#[command(name = "ddt", version, about = "Deformed Donaldson-Thomas connections: exact checks and torus solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; defaults are used for anything missing.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for the report and any CSV or snapshot artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include wall-clock timings (reports are then no longer reproducible byte for byte).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Exact identity catalog plus float property suites.
    Verify {
        /// Replace an identity by a mutated variant: ID, ID:site or ID:site=value.
        #[arg(long)]
        mutate: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        float_samples: usize,
        #[arg(long, default_value_t = 200)]
        pairing_samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Split a 2-form into its 7- and 14-dimensional parts.
    Decompose {
        /// 21 coefficients in lexicographic blade order; defaults to the configured flux form.
        #[arg(long)]
        form: Option<String>,
    },
    /// Solve for the G2-instanton in the configured flux class.
    Instanton,
    /// Continue the instanton in the large-radius parameter.
    Continue,
    /// Run the gradient flow from a random small potential.
    Flow,
    /// Check a stored flow trajectory against the Spin(7) equations on the cylinder.
    Cylinder {
        /// Snapshot file written by `flow`; defaults to <out>/potentials.snap.
        #[arg(long)]
        snapshots: Option<PathBuf>,
    },
    /// Check the multi-moment map identity and properties of the 3-form.
    Moment,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let name = match &cli.command {
        Command::Verify { .. } => "verify",
        Command::Decompose { .. } => "decompose",
        Command::Instanton => "instanton",
        Command::Continue => "continue",
        Command::Flow => "flow",
        Command::Cylinder { .. } => "cylinder",
        Command::Moment => "moment",
    };

    let (config_echo, out_dir, result) = match &cli.command {
        Command::Verify { mutate, float_samples, pairing_samples, seed } => {
            let echo = json!({
                "mutate": mutate,
                "float_samples": float_samples,
                "pairing_samples": pairing_samples,
                "seed": seed,
            });
            let result = mutate
                .iter()
                .map(|m| commands::parse_mutation(m))
                .collect::<Result<Vec<_>, Failure>>()
                .and_then(|specs| commands::verify(&specs, *float_samples, *pairing_samples, *seed, cli.timings));
            (echo, cli.out.clone(), result)
        }
        command => match RunConfig::load(cli.config.as_deref()) {
            Err(f) => (serde_json::Value::Null, cli.out.clone(), Err(f)),
            Ok(mut cfg) => {
                if cli.out.is_some() {
                    cfg.output_dir = cli.out.clone();
                }
                let out = cfg.output_dir.clone();
                if let Some(dir) = &out {
                    if let Err(e) = std::fs::create_dir_all(dir) {
                        eprintln!("ddt: cannot create {}: {e}", dir.display());
                        return ExitCode::from(2);
                    }
                }
                let result = match command {
                    Command::Decompose { form } => commands::decompose(&cfg, form.as_deref()),
                    Command::Instanton => commands::instanton(&cfg, out.as_deref()),
                    Command::Continue => commands::continue_branch(&cfg, out.as_deref()),
                    Command::Flow => commands::flow(&cfg, out.as_deref()),
                    Command::Cylinder { snapshots } => match snapshots.clone().or_else(|| out.as_ref().map(|d| d.join("potentials.snap"))) {
                        Some(path) => commands::cylinder(&cfg, &path),
                        None => Err(Failure::input("cylinder needs --snapshots or an output directory")),
                    },
                    Command::Moment => commands::moment(&cfg),
                    Command::Verify { .. } => unreachable!("handled above"),
                };
                (serde_json::to_value(&cfg).expect("config serializes"), out, result)
            }
        },
    };

    let mut report = Report::new(name, config_echo, result);
    if cli.timings {
        report.wall_time_seconds = Some(start.elapsed().as_secs_f64());
    }
    report.emit(out_dir.as_deref())
}
