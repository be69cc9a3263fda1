use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use coorbit_core::cli::{self, ExperimentKind};

/// Runs one experiment and writes `<kind>.csv` and `<kind>.json`.
///
/// Exit status: 0 when every tolerance holds, 1 on a tolerance violation,
/// 2 on a usage or configuration error, 3 on a numerical failure.
#[derive(Parser, Debug)]
#[command(name = "coorbit-lab", version)]
struct Args {
    /// verify-gaussian, orbit-scan, coorbit-norm, frame-sweep, density or rep-selftest.
    kind: String,
    #[arg(long)]
    config: PathBuf,
    /// Overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `experiment.seed`.
    #[arg(long)]
    seed: Option<u64>,
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let kind: ExperimentKind = match args.kind.parse() {
        Ok(k) => k,
        Err(e) => {
            eprintln!("error: {e}");
            return code(cli::EXIT_CONFIG);
        }
    };
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return code(cli::EXIT_CONFIG);
        }
    };
    let config = match cli::parse_config_with_seed(&text, args.seed) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config.display());
            return code(cli::EXIT_CONFIG);
        }
    };
    if config.kind != kind {
        eprintln!(
            "error: {}: configuration is for `{}`, not `{kind}`",
            args.config.display(),
            config.kind
        );
        return code(cli::EXIT_CONFIG);
    }
    let outcome = match cli::run_experiment(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {kind}: {e}");
            return code(cli::EXIT_RUNTIME);
        }
    };
    let dir = args.out.unwrap_or_else(|| PathBuf::from(&config.output));
    match cli::write_artifacts(&config, &outcome, &dir) {
        Ok((csv, json)) => println!(
            "{kind}: {} ({}, {})",
            if outcome.pass { "pass" } else { "FAIL" },
            csv.display(),
            json.display()
        ),
        Err(e) => {
            eprintln!("error: cannot write results to {}: {e}", dir.display());
            return code(cli::EXIT_RUNTIME);
        }
    }
    code(if outcome.pass {
        cli::EXIT_PASS
    } else {
        cli::EXIT_TOLERANCE
    })
}
