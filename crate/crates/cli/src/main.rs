//! `polyharm`: polyhedral harmonics of triakis tetrahedra and octahedra.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyharm::geometry::Family;
use polyharm::harmonic::SpaceKind;
use polyharm::{parse_rational, Rational};

use crate::render::Outcome;

/// Version of the JSON envelope written by every subcommand.
pub const SCHEMA_VERSION: &str = "polyharm/1";

#[derive(Parser, Debug)]
#[command(name = "polyharm", version, about = "Polyhedral harmonics of isohedral triakis tetrahedra and octahedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients, space identification and a mean value spot check per (k, r).
    Analyze(AnalyzeArgs),
    /// Invariant decomposition of the tau sums against the closed forms.
    Coeffs(CoeffsArgs),
    /// Critical values with their certificates.
    Critical(CriticalArgs),
    /// Exact bases of the harmonic spaces.
    Harmonics(HarmonicsArgs),
    /// Mean value defects of a harmonic space over a skeleton.
    Mvp(MvpArgs),
    /// Runs the full acceptance suite.
    PaperCheck(PaperCheckArgs),
    /// Vertices, feet of perpendiculars and incidence numbers.
    DumpGeometry(GeometryArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Working precision in bits: 64, 100, 128, 192 or 256.
    #[arg(long, default_value_t = 100, value_parser = parse_precision)]
    precision: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Cell {
    /// `tetra` or `octa`.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Skeleton dimensions, e.g. `1` or `0,1,2,3`.
    #[arg(long, value_delimiter = ',', value_parser = parse_k, default_values_t = [0u8, 1, 2, 3])]
    k: Vec<u8>,
    /// Parameter as a decimal or `p/q`.
    #[arg(long, value_parser = parse_r, conflicts_with = "scan", required_unless_present = "scan")]
    r: Option<Rational>,
    /// `lo:hi:step`, all decimals or `p/q`.
    #[arg(long, value_parser = parse_scan)]
    scan: Option<Scan>,
    /// Snap `r` to a certified critical value within this distance; 0 disables.
    #[arg(long, default_value_t = 1e-5, value_parser = parse_nonneg)]
    snap_tol: f64,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[command(flatten)]
    cell: Cell,
    /// Smallest magnitude accepted as a nonzero coefficient.
    #[arg(long, default_value_t = 1e-8, value_parser = parse_positive)]
    tol: f64,
    /// Highest tau degree whose annihilation is re-verified.
    #[arg(long, default_value_t = 8)]
    max_tau_degree: u32,
    /// Include the geometry of each instance in the report.
    #[arg(long)]
    dump_geometry: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    #[command(flatten)]
    cell: Cell,
    /// Degrees, e.g. `2..8` or `6`.
    #[arg(long, default_value = "2..8", value_parser = parse_m)]
    m: MRange,
    /// Face weights: `normalized` (matches the closed forms) or `raw`.
    #[arg(long, default_value = "normalized", value_parser = ["normalized", "raw"])]
    weights: String,
    #[arg(long, default_value_t = 1e-10, value_parser = parse_positive)]
    tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct CriticalArgs {
    /// Family; both when omitted.
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[arg(long, value_delimiter = ',', value_parser = parse_k, default_values_t = [0u8, 1, 2, 3])]
    k: Vec<u8>,
    #[arg(long, default_value_t = 1e-8, value_parser = parse_positive)]
    tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct HarmonicsArgs {
    /// `a3`, `b3` or `jumped`.
    #[arg(long, value_parser = parse_space)]
    system: SpaceKind,
    /// Defaults to two degrees past the generator.
    #[arg(long)]
    max_degree: Option<u32>,
    /// Write the basis polynomials as JSON to this file.
    #[arg(long)]
    emit_basis: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct MvpArgs {
    /// `tetra` or `octa`.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long, value_parser = parse_k)]
    k: u8,
    #[arg(long, value_parser = parse_r)]
    r: Rational,
    /// Space to test; the identified space when omitted.
    #[arg(long, value_parser = parse_space)]
    space: Option<SpaceKind>,
    #[arg(long, default_value_t = 1e-9, value_parser = parse_positive)]
    tol: f64,
    #[arg(long, default_value_t = 1e-5, value_parser = parse_nonneg)]
    snap_tol: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct PaperCheckArgs {
    /// Keep only the checks of one family.
    #[arg(long, value_parser = parse_family)]
    family: Option<Family>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct GeometryArgs {
    /// `tetra` or `octa`.
    #[arg(long, value_parser = parse_family)]
    family: Family,
    #[arg(long, value_parser = parse_r)]
    r: Rational,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone)]
struct Scan {
    lo: Rational,
    hi: Rational,
    step: Rational,
}

#[derive(Debug, Clone, Copy)]
struct MRange {
    lo: u32,
    hi: u32,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

fn parse_space(s: &str) -> Result<SpaceKind, String> {
    s.parse::<SpaceKind>().map_err(|e| e.to_string())
}

fn parse_k(s: &str) -> Result<u8, String> {
    match s.trim().parse::<u8>() {
        Ok(k) if k <= 3 => Ok(k),
        _ => Err(format!("k must be 0, 1, 2 or 3, got {s:?}")),
    }
}

fn parse_r(s: &str) -> Result<Rational, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    if r <= Rational::from_integer(0.into()) {
        return Err(format!("r must be positive, got {s}"));
    }
    Ok(r)
}

fn parse_scan(s: &str) -> Result<Scan, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(format!("scan must be lo:hi:step, got {s:?}"));
    };
    let scan = Scan {
        lo: parse_r(lo)?,
        hi: parse_r(hi)?,
        step: parse_r(step)?,
    };
    if scan.hi < scan.lo {
        return Err("scan needs lo <= hi".into());
    }
    Ok(scan)
}

fn parse_m(s: &str) -> Result<MRange, String> {
    let bad = || format!("m must be N or LO..HI with 1 <= LO <= HI <= 16, got {s:?}");
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
    if lo == 0 || lo > hi || hi > 16 {
        return Err(bad());
    }
    Ok(MRange { lo, hi })
}

fn parse_precision(s: &str) -> Result<u32, String> {
    match s.parse::<u32>() {
        Ok(b @ (64 | 100 | 128 | 192 | 256)) => Ok(b),
        _ => Err(format!("precision must be one of 64, 100, 128, 192, 256 bits, got {s:?}")),
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn parse_nonneg(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a non-negative number, got {s:?}")),
    }
}

impl Cell {
    fn values(&self) -> Vec<Rational> {
        match (&self.r, &self.scan) {
            (Some(r), _) => vec![r.clone()],
            (None, Some(scan)) => {
                let mut out = Vec::new();
                let mut r = scan.lo.clone();
                while r <= scan.hi {
                    out.push(r.clone());
                    r += &scan.step;
                }
                out
            }
            (None, None) => Vec::new(),
        }
    }
}

/// Usage errors exit with 2, failed cross-checks with 1.
fn exit_code(e: &anyhow::Error) -> u8 {
    use polyharm::Error as E;
    match e.downcast_ref::<E>() {
        Some(E::Parse(_) | E::UnsupportedFamily(_) | E::NonPositiveParameter(_) | E::BadSkeletonDimension(_)) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<(Outcome, Common)> {
    Ok(match cli.command {
        Command::Analyze(a) => (commands::analyze(&a)?, a.common),
        Command::Coeffs(a) => (commands::coeffs(&a)?, a.common),
        Command::Critical(a) => (commands::critical(&a)?, a.common),
        Command::Harmonics(a) => (commands::harmonics(&a)?, a.common),
        Command::Mvp(a) => (commands::mvp(&a)?, a.common),
        Command::PaperCheck(a) => (commands::paper_check(&a)?, a.common),
        Command::DumpGeometry(a) => (commands::dump_geometry(&a)?, a.common),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli).and_then(|(outcome, common)| {
        outcome.write(common.format, common.out.as_deref(), common.precision)?;
        Ok(outcome.ok)
    }) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
