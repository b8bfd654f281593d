//! Command-line driver: `qwei bound|verify|selfcheck|spectra --config
//! <path> [--strict] [--out <dir>]`.
//!
//! Exit codes: 0 success, 2 configuration or I/O error, 3 failed
//! numerical certification (warnings escalate under `--strict`), 4 a
//! state violates the certified bound, 5 a named self-check failed.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qwei::config::{Mode, RunConfig};
use qwei::run::{execute, exit_code_for, EXIT_CONFIG};

#[derive(Parser)]
#[command(
    name = "qwei",
    version,
    about = "Certified lower bounds for weighted time averages of the Dirac field energy density"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the certified bound B and emit spectra/kernel plot data.
    Bound(CommonArgs),
    /// Evaluate every corpus state and assert I_time ≥ −B.
    Verify(CommonArgs),
    /// Run the named invariant suite at the configured scale.
    Selfcheck(CommonArgs),
    /// Emit plot-data CSVs (Y, σ, f̂, per-state ρ) without a bound.
    Spectra(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Escalate truncation/tail warnings to certification failures.
    #[arg(long)]
    strict: bool,
    /// Output directory (overrides QWEI_OUT and the configured value).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, args) = match &cli.cmd {
        Cmd::Bound(a) => (Mode::Bound, a),
        Cmd::Verify(a) => (Mode::Verify, a),
        Cmd::Selfcheck(a) => (Mode::Selfcheck, a),
        Cmd::Spectra(a) => (Mode::Spectra, a),
    };

    let cfg = match RunConfig::from_path(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };

    let out = args
        .out
        .clone()
        .or_else(|| std::env::var_os("QWEI_OUT").map(PathBuf::from));

    match execute(cfg, Some(mode), args.strict, out) {
        Ok(outcome) => {
            for c in &outcome.report.checks {
                let verdict = if c.passed { "PASS" } else { "FAIL" };
                println!("{verdict} {}: {}", c.name, c.detail);
            }
            for w in &outcome.report.warnings {
                println!("WARN {w}");
            }
            if let Some(b) = &outcome.report.bound {
                println!(
                    "bound B = {:.12e} (Λ* = {}, quadrature parts {:.6e}, trace caps {:.6e})",
                    b.total,
                    b.lambda_star,
                    b.b24 + b.b_rem1 + b.b_rem3,
                    b.r1_cap + b.r3_cap
                );
            }
            if !outcome.report.states.is_empty() {
                println!(
                    "{} states: min I_time = {:.6e}, min margin = {:.6e}",
                    outcome.report.states.len(),
                    outcome.report.min_i_time.unwrap_or(f64::NAN),
                    outcome.report.min_margin.unwrap_or(f64::NAN)
                );
            }
            println!("artifacts written to {}", outcome.out_dir.display());
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
