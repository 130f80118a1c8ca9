//! Argument parsing and command dispatch. Exit codes: 0 success, 1 failed
//! verification or identity, 2 usage error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use h2tiles_core::counting::{a_primitive, a_primitive_extended, a_total, b_primitive};
use h2tiles_core::origami::{orbit_decomposition_with, OrbitOptions, OrigamiError, DEFAULT_MAX_STATES};
use h2tiles_core::qseries::{
    eisenstein_e2, fit_default, h_series, odd_part_generating_series, series_mul,
    type_a_generating_series, SeriesError,
};
use h2tiles_core::surfaces::{enumerate_all, is_height_primitive, is_primitive};
use h2tiles_core::{OrbitReport, QMBasis, QSeries, Rational, SurfaceType};

use crate::format::{self, Format};
use crate::verify;

#[derive(Debug, Parser)]
#[command(name = "h2tiles", version, about = "Square-tiled surfaces in H(2): counts, enumeration, orbits and q-series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; each command accepts a subset.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Cap on states visited by orbit searches.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STATES)]
    pub max_states: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count table for odd n in a range such as `5..27` (or a single `n`).
    Count { range: String },
    /// List the surfaces with `n` squares.
    Enumerate {
        n: u64,
        #[arg(long, value_enum, default_value_t = Filter::All)]
        filter: Filter,
    },
    /// Orbits of the primitive surfaces with `n` squares.
    Orbits { n: u64 },
    /// Quasimodular fits and generating-series identities.
    Qm {
        #[arg(value_enum)]
        task: QmTask,
        #[arg(long, default_value_t = 200)]
        order: usize,
    },
    /// Coefficient file of a generating series.
    Series {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value_t = 100)]
        order: usize,
    },
    /// Run every cross-check up to an odd bound.
    Verify {
        #[arg(long)]
        max_n: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Filter {
    All,
    Primitive,
    HeightPrimitive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QmTask {
    FitH4,
    FitH2,
    E2sq,
    Corollary,
    Theorem13,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Which {
    ATotal,
    APrimitive,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// A check failed; the report is still written.
    #[error("{message}")]
    Failure { message: String, report: String },
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure { .. } | CliError::Io(_) => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn unsupported(format: Format, command: &str) -> CliError {
    usage(format!("format {format:?} is not supported by `{command}`").to_lowercase())
}

fn parse_range(text: &str) -> Result<(u64, u64), CliError> {
    let parse = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|_| usage(format!("invalid bound `{s}`")))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let n = parse(text)?;
            (n, n)
        }
    };
    if lo == 0 || lo > hi {
        return Err(usage(format!("range `{text}` must satisfy 1 <= lo <= hi")));
    }
    if lo % 2 == 0 || hi % 2 == 0 {
        return Err(usage(format!("range `{text}` must have odd bounds")));
    }
    Ok((lo, hi))
}

fn cmd_count(range: &str, format: Format) -> Result<String, CliError> {
    let (lo, hi) = parse_range(range)?;
    let rows = format::count_rows(lo, hi).map_err(|e| usage(e.to_string()))?;
    Ok(format::count_table(&rows, format))
}

fn cmd_enumerate(n: u64, filter: Filter, format: Format) -> Result<String, CliError> {
    if n < 3 {
        return Err(usage(format!("enumerate needs n >= 3, got {n}")));
    }
    let mut surfaces = enumerate_all(n).map_err(|e| usage(e.to_string()))?;
    match filter {
        Filter::All => {}
        Filter::Primitive => surfaces.retain(is_primitive),
        Filter::HeightPrimitive => surfaces.retain(is_height_primitive),
    }
    match format {
        Format::Json => Ok(format::surfaces_json(&surfaces)),
        Format::Csv => Ok(format::surfaces_csv(&surfaces)),
        other => Err(unsupported(other, "enumerate")),
    }
}

fn render_orbits(report: &OrbitReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(format::orbit_report_json(report)),
        Format::Csv => Ok(format::orbit_report_csv(report)),
        Format::Md => Ok(format::orbit_report_md(report)),
        other => Err(unsupported(other, "orbits")),
    }
}

fn cmd_orbits(n: u64, format: Format, max_states: usize) -> Result<String, CliError> {
    if n < 3 || n % 2 == 0 {
        return Err(usage(format!("orbits needs an odd n >= 3, got {n}")));
    }
    if format == Format::Tsv {
        return Err(unsupported(format, "orbits"));
    }
    let options = OrbitOptions {
        max_states,
        ..OrbitOptions::default()
    };
    let report = match orbit_decomposition_with(n, options) {
        Ok(r) => r,
        Err(OrigamiError::StateCap { visited, cap, partial }) => {
            return Err(CliError::Failure {
                message: format!("state cap {cap} exceeded after {visited} states; partial report written"),
                report: render_orbits(&partial, format)?,
            })
        }
        Err(e) => return Err(CliError::Failure { message: e.to_string(), report: String::new() }),
    };
    let rendered = render_orbits(&report, format)?;
    let got: Vec<(usize, SurfaceType)> = report.orbits.iter().map(|o| (o.size, o.surface_type)).collect();
    let mut want = vec![(a_primitive(n).expect("odd n") as usize, SurfaceType::A)];
    if n >= 5 {
        want.push((b_primitive(n).expect("odd n") as usize, SurfaceType::B));
    }
    if got != want {
        return Err(CliError::Failure {
            message: format!("orbit sizes {got:?} differ from the closed forms {want:?}"),
            report: rendered,
        });
    }
    Ok(rendered)
}

fn fit_report(
    task: &str,
    order: usize,
    target: &QSeries,
    basis: &QMBasis,
    format: Format,
) -> Result<String, CliError> {
    match fit_default(target, basis) {
        Ok(coeffs) => {
            let names: Vec<&str> = basis.names().collect();
            Ok(qm_output(task, order, &names, &coeffs, format))
        }
        Err(SeriesError::NotInSpan { index }) => Err(CliError::Failure {
            message: format!("{task}: fit fails at coefficient {index}"),
            report: String::new(),
        }),
        Err(e) => Err(CliError::Failure {
            message: format!("{task}: {e}"),
            report: String::new(),
        }),
    }
}

fn qm_output(task: &str, order: usize, names: &[&str], coeffs: &[Rational], format: Format) -> String {
    match format {
        Format::Json => {
            let terms: Vec<serde_json::Value> = names
                .iter()
                .zip(coeffs)
                .map(|(n, c)| serde_json::json!({ "name": n, "value": format::rational_str(c) }))
                .collect();
            let v = serde_json::json!({ "task": task, "order": order, "status": "pass", "coefficients": terms });
            format!("{v}\n")
        }
        _ => {
            let mut out = String::new();
            for (n, c) in names.iter().zip(coeffs) {
                out.push_str(&format!("{n}\t{}\n", format::rational_str(c)));
            }
            out.push_str(&format!("{task}: verified to order {order}\n"));
            out
        }
    }
}

fn identity_report(task: &str, order: usize, series: &QSeries, want: impl Fn(usize) -> Rational, format: Format) -> Result<String, CliError> {
    if let Some(index) = (1..=order).find(|&n| series.coeff(n) != want(n)) {
        return Err(CliError::Failure {
            message: format!("{task}: first failing index {index}"),
            report: String::new(),
        });
    }
    Ok(qm_output(task, order, &[], &[], format))
}

fn cmd_qm(task: QmTask, order: usize, format: Format) -> Result<String, CliError> {
    if order < 7 {
        return Err(usage(format!("qm needs --order >= 7, got {order}")));
    }
    if matches!(format, Format::Csv | Format::Md) {
        return Err(unsupported(format, "qm"));
    }
    let basis = |level| QMBasis::weight4(level, order).expect("catalogued level");
    match task {
        QmTask::FitH4 => fit_report("fit-h4", order, &h_series(4, order), &basis(4), format),
        QmTask::FitH2 => fit_report("fit-h2", order, &h_series(2, order), &basis(2), format),
        QmTask::E2sq => {
            let e2 = eisenstein_e2(order);
            let sq = series_mul(&e2, &e2).expect("same order");
            fit_report("e2sq", order, &sq, &basis(1), format)
        }
        QmTask::Corollary => identity_report(
            "corollary",
            order,
            &type_a_generating_series(order),
            |n| a_total(n as u64),
            format,
        ),
        QmTask::Theorem13 => identity_report(
            "theorem13",
            order,
            &odd_part_generating_series(order),
            |n| if n % 2 == 1 { a_total(n as u64) } else { Rational::from_integer(0) },
            format,
        ),
    }
}

fn cmd_series(which: Which, order: usize, format: Format) -> Result<String, CliError> {
    let series = match which {
        Which::ATotal => type_a_generating_series(order),
        Which::APrimitive => QSeries::from_fn(order, |n| {
            if n == 0 {
                Rational::from_integer(0)
            } else {
                a_primitive_extended(n as u64)
            }
        }),
    };
    match format {
        Format::Tsv => Ok(format::series_tsv(&series)),
        Format::Json => Ok(format::series_json(&series)),
        Format::Csv => Ok(format::series_csv(&series)),
        other => Err(unsupported(other, "series")),
    }
}

fn cmd_verify(max_n: u64, format: Format, max_states: usize) -> Result<String, CliError> {
    if max_n < 5 || max_n % 2 == 0 {
        return Err(usage(format!("verify needs an odd --max-n >= 5, got {max_n}")));
    }
    if format != Format::Json {
        return Err(unsupported(format, "verify"));
    }
    let outcome = verify::run(max_n, max_states);
    let report = outcome.to_json();
    if outcome.exit_code != 0 {
        let names: Vec<&str> = outcome.failed().map(|c| c.name).collect();
        return Err(CliError::Failure {
            message: format!("failed checks: {}", names.join(", ")),
            report,
        });
    }
    Ok(report)
}

fn dispatch(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Count { range } => cmd_count(range, cli.format.unwrap_or(Format::Csv)),
        Command::Enumerate { n, filter } => cmd_enumerate(*n, *filter, cli.format.unwrap_or(Format::Json)),
        Command::Orbits { n } => cmd_orbits(*n, cli.format.unwrap_or(Format::Json), cli.max_states),
        Command::Qm { task, order } => cmd_qm(*task, *order, cli.format.unwrap_or(Format::Tsv)),
        Command::Series { which, order } => cmd_series(*which, *order, cli.format.unwrap_or(Format::Tsv)),
        Command::Verify { max_n } => cmd_verify(*max_n, cli.format.unwrap_or(Format::Json), cli.max_states),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> u8 {
    let result = dispatch(cli).and_then(|text| emit(cli, &text));
    match result {
        Ok(()) => 0,
        Err(err) => {
            if let CliError::Failure { report, .. } = &err {
                if !report.is_empty() {
                    if let Err(io) = emit(cli, report) {
                        eprintln!("error: cannot write output: {io}");
                    }
                }
            }
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

pub fn run_from_env() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(&cli))
}
