//! Command-line front end for the `ruelle` crate.
//!
//! Every command builds a [`Report`] holding the resolved configuration,
//! named pass/fail checks and the exact results. The process exits with 0
//! only when all checks pass.

pub mod args;
pub mod commands;
pub mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{Context, Result};

pub use args::{Cli, Command, FixedpointAction, SolenoidAction};
pub use report::{Check, Report, RunConfig, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

pub fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::VerifyFixedPoint(a) => commands::cmd_verify_fixed_point(cli, a),
        Command::Fixedpoint {
            action: FixedpointAction::Verify(a),
        } => commands::cmd_fixedpoint_verify(cli, a),
        Command::Fixedpoint {
            action: FixedpointAction::Growth(a),
        } => commands::cmd_fixedpoint_growth(cli, a),
        Command::Cascade(a) => commands::cmd_cascade(cli, a),
        Command::Transfer(a) => commands::cmd_transfer(cli, a),
        Command::Nullspace(a) => commands::cmd_nullspace(cli, a),
        Command::Solenoid {
            action: SolenoidAction::Walk(a),
        } => commands::cmd_solenoid_walk(cli, a),
        Command::Ergodicity(a) => commands::cmd_ergodicity(cli, a),
        Command::DetailBasis(a) => commands::cmd_detail_basis(cli, a),
    }
}

pub fn render(cli: &Cli, report: &Report, w: &mut dyn Write) -> Result<()> {
    if cli.json {
        report.write_json(w)
    } else if cli.csv {
        report.write_csv(w)
    } else {
        report.write_text(w)
    }
}

/// Runs the command, writes its output and returns the exit status.
pub fn execute(cli: &Cli) -> i32 {
    let outcome = run(cli).and_then(|report| {
        match &cli.out {
            Some(path) => {
                let file = File::create(path)
                    .with_context(|| format!("creating {}", path.display()))?;
                let mut w = BufWriter::new(file);
                render(cli, &report, &mut w)?;
                w.flush()?;
            }
            None => render(cli, &report, &mut io::stdout().lock())?,
        }
        Ok(report)
    });
    match outcome {
        Ok(report) => {
            if let Some(failed) = report.checks.iter().find(|c| !c.passed) {
                eprintln!("check failed: {} ({})", failed.name, failed.detail);
                EXIT_CHECK_FAILED
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}
