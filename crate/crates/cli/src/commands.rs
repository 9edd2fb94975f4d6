use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use axoball_core::moment_matrix::{build_b, build_d, build_f, build_g};
use axoball_core::{analyze, solve_charge_density, Rational, Strategy};
use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CliError;
use crate::problem::Problem;
use crate::report::Report;
use crate::{profile, verify};

pub const MAX_ORDER: u16 = 200;

#[derive(Debug, Parser)]
#[command(name = "axoball", version, about = "Exact charge, moments and force on a grounded ball in an axial field")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem file and print a JSON report.
    Solve {
        file: PathBuf,
        /// Cross-check the exact results against the numerical oracle.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print one of the exact matrices.
    Matrix {
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..=MAX_ORDER as i64))]
        order: u16,
        #[arg(long, value_enum, ignore_case = true)]
        which: MatrixKind,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Table)]
        format: MatrixFormat,
    },
    /// Sample σ(z) and the axis potential u(s) as CSV.
    Profile {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    /// Legendre moment matrix.
    #[value(name = "F")]
    F,
    /// Inverse of F.
    #[value(name = "G")]
    G,
    /// Monomial coefficients of the Legendre polynomials, by column.
    #[value(name = "B")]
    B,
    /// Diagonal of squared Legendre norms.
    #[value(name = "D")]
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    Table,
    Csv,
}

fn read_problem(path: &Path) -> Result<Problem, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Problem::from_json(&text).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// Builds the report for a parsed problem, with the optional verification
/// and profile blocks filled in.
pub fn solve(problem: &Problem, with_verification: bool, strategy: Strategy) -> Result<Report, CliError> {
    let density = solve_charge_density(&problem.spec);
    let results = analyze(&problem.spec, &problem.moments, strategy);
    let mut report = Report::new(problem, &density, &results);
    if with_verification {
        report.verification = Some(verify::verify(&density, &problem.moments, strategy));
    }
    if let Some(request) = &problem.profile {
        report.profile = Some(profile::sample(&density, request)?);
    }
    Ok(report)
}

/// Renders the dense `order × order` matrix, entries as `p/q`.
pub fn render_matrix(order: usize, which: MatrixKind, format: MatrixFormat) -> Result<String, CliError> {
    if !(1..=MAX_ORDER as usize).contains(&order) {
        return Err(CliError::Input(format!("--order must be in 1..={MAX_ORDER}, got {order}")));
    }
    let dense: Vec<Vec<Rational>> = match which {
        MatrixKind::F => build_f(order).to_dense(),
        MatrixKind::G => build_g(order).to_dense(),
        MatrixKind::B => build_b(order).to_dense(),
        MatrixKind::D => build_d(order).to_parity_triangular().to_dense(),
    };
    let cells: Vec<Vec<String>> = dense
        .iter()
        .map(|row| row.iter().map(Rational::to_string).collect())
        .collect();
    let mut out = String::new();
    match format {
        MatrixFormat::Csv => {
            for row in &cells {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        MatrixFormat::Table => {
            let widths: Vec<usize> = (0..order)
                .map(|j| cells.iter().map(|row| row[j].len()).max().unwrap_or(0))
                .collect();
            for row in &cells {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(cell, &w)| format!("{cell:>w$}"))
                    .collect();
                out.push_str(&line.join("  "));
                out.push('\n');
            }
        }
    }
    Ok(out)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve { file, verify: with_verification, out } => {
            let problem = read_problem(&file)?;
            let report = solve(&problem, with_verification, Strategy::default())?;
            emit(out.as_deref(), &report.to_json())?;
            match &report.verification {
                Some(v) if !v.passed => Err(CliError::Verification(verify::failures(v).join("; "))),
                _ => Ok(()),
            }
        }
        Command::Matrix { order, which, format } => emit(None, &render_matrix(order as usize, which, format)?),
        Command::Profile { file, out } => {
            let problem = read_problem(&file)?;
            let request = problem
                .profile
                .as_ref()
                .ok_or_else(|| CliError::Input(format!("{}: field `profile`: required by the profile command", file.display())))?;
            let density = solve_charge_density(&problem.spec);
            let block = profile::sample(&density, request)?;
            emit(out.as_deref(), &profile::to_csv(&block))
        }
    }
}
