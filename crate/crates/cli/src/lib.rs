//! Command-line harness around `lgsim-core`: envelope sweeps with CSV/SVG
//! output, tilt scans, the transition threshold, classical-model curves,
//! and the invariant verification suite.
//!
//! Exit codes: 0 on success, 1 on runtime failure (I/O, no crossing,
//! failed verification), 2 on bad usage or configuration.

// Fixed 2x2/4x4 kernels read better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod config;
pub mod output;
pub mod sweep;
pub mod verify;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{parse_args, parse_config_text, CliInvocation, Command, PartialConfig, SweepConfig};

use config::usage;
use sweep::{classical_curve, run_envelope_sweep, run_threshold, run_tilt_table};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("failed to write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("failed to create output directory {path}: {source}")]
    CreateDir {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] lgsim_core::Error),
}

/// Entry point shared by the binary and the tests. Returns the process
/// exit code.
pub fn cli_main(args: &[String]) -> i32 {
    let invocation = match parse_args(args) {
        Ok(inv) => inv,
        Err(err) => {
            eprintln!("error: {err}");
            eprintln!();
            eprintln!("{}", usage());
            return 2;
        }
    };

    if invocation.command == Command::Help {
        println!("{}", usage());
        return 0;
    }

    let mut from_file = PartialConfig::default();
    if let Some(path) = &invocation.config_path {
        let text = match std::fs::read_to_string(path) {
            Ok(text) => text,
            Err(err) => {
                eprintln!("error: cannot read config {}: {err}", path.display());
                return 2;
            }
        };
        from_file = match parse_config_text(&text) {
            Ok(partial) => partial,
            Err(err) => {
                eprintln!("error: config {}: {err}", path.display());
                return 2;
            }
        };
    }

    let cfg = match from_file.overlay(invocation.overrides).into_config() {
        Ok(cfg) => cfg,
        Err(err) => {
            eprintln!("error: {err}");
            return 2;
        }
    };

    let outcome = match invocation.command {
        Command::Sweep => run_sweep_command(&cfg),
        Command::Tilt { retardation } => run_tilt_command(&cfg, retardation),
        Command::Threshold => run_threshold_command(&cfg),
        Command::Classical => run_classical_command(&cfg),
        Command::Verify => return run_verify_command(&cfg),
        Command::Help => unreachable!("handled above"),
    };
    match outcome {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn ensure_output_dir(cfg: &SweepConfig) -> Result<(), HarnessError> {
    std::fs::create_dir_all(&cfg.output_dir).map_err(|source| HarnessError::CreateDir {
        path: cfg.output_dir.clone(),
        source,
    })
}

fn run_sweep_command(cfg: &SweepConfig) -> Result<(), HarnessError> {
    ensure_output_dir(cfg)?;
    let rows = run_envelope_sweep(cfg);
    let csv_path = cfg.output_dir.join("sweep.csv");
    output::emit_csv(&rows, &csv_path)?;
    println!("wrote {} ({} rows)", csv_path.display(), rows.len());
    if cfg.emit_svg {
        let svg_path = cfg.output_dir.join("sweep.svg");
        output::emit_svg(&rows, &svg_path)?;
        println!("wrote {}", svg_path.display());
    }
    Ok(())
}

fn run_tilt_command(cfg: &SweepConfig, retardation: f64) -> Result<(), HarnessError> {
    ensure_output_dir(cfg)?;
    let rows = run_tilt_table(retardation, &cfg.spectrum, cfg.tilt_samples);
    let min_minus = rows.iter().map(|r| r.k_minus).fold(f64::INFINITY, f64::min);
    let min_plus = rows.iter().map(|r| r.k_plus).fold(f64::INFINITY, f64::min);
    println!("retardation_waves: {retardation:.16e}");
    println!("k_minus_min: {min_minus:.16e}");
    println!("k_plus_min: {min_plus:.16e}");
    let path = cfg.output_dir.join("tilt.csv");
    output::emit_tilt_csv(&rows, &path)?;
    println!("wrote {} ({} rows)", path.display(), rows.len());
    Ok(())
}

fn run_threshold_command(cfg: &SweepConfig) -> Result<(), HarnessError> {
    let summary = run_threshold(cfg)?;
    println!("r_star_minus: {:.16e}", summary.r_star_minus);
    println!("r_star_plus: {:.16e}", summary.r_star_plus);
    println!("sigma: {:.16e}", summary.sigma);
    println!("lambda0: {:.16e}", summary.lambda0);
    Ok(())
}

fn run_classical_command(cfg: &SweepConfig) -> Result<(), HarnessError> {
    ensure_output_dir(cfg)?;
    let rows = classical_curve(1000);
    let path = cfg.output_dir.join("classical.csv");
    output::emit_classical_csv(&rows, &path)?;
    println!("wrote {} ({} rows)", path.display(), rows.len());
    Ok(())
}

fn run_verify_command(cfg: &SweepConfig) -> i32 {
    let checks = verify::run_verification(cfg);
    let mut failed = 0usize;
    for check in &checks {
        let status = if check.passed() { "PASS" } else { "FAIL" };
        if !check.passed() {
            failed += 1;
        }
        println!(
            "[{status}] {:<42} residual {:>10.3e}  (tol {:.1e})",
            check.name, check.residual, check.tolerance
        );
    }
    println!(
        "verify: {} checks, {} passed, {} failed",
        checks.len(),
        checks.len() - failed,
        failed
    );
    if failed == 0 {
        0
    } else {
        1
    }
}
