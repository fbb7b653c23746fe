//! Command-line front end.
//!
//! Every invocation is first turned into a [`JobConfig`], which is echoed
//! into the output metadata and can be replayed with `solenoid run --config`.
//! Output is a [`Table`] rendered as CSV (with `#` comment lines) or JSON.
//!
//! Exit codes: 0 success, 1 a verification suite failed, 2 configuration
//! error, 3 numerical failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ab_radial::{self, FluxConfig};
use crate::angle::Angle;
use crate::assembly::{self, AngleTable, DiracFamily, ExtensionChoice};
use crate::dirac_radial::{self, DiracParams};
use crate::error::Error;
use crate::ms_radial;
use crate::suites;
use crate::verify::{quad_semi_infinite, QuadratureConfig, TailDecay};
use crate::Region;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "solenoid", version, about = "Spectra and eigenfunctions in Aharonov-Bohm and magnetic-solenoid fields")]
pub struct Cli {
    /// Output file (standard output when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub options: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GlobalOpts {
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Relative tolerance of the quadratures behind norms and suites.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed of the randomized verification suites.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Table of discrete levels.
    Spectrum(PhysicsArgs),
    /// Samples of one eigenfunction on a radial grid.
    Eigenfunction(EigenArgs),
    /// Runs a named verification suite.
    Verify(VerifyArgs),
    /// Spectrum tables stacked over a swept parameter.
    Sweep(SweepArgs),
    /// Replays a job stored as JSON: a bare config or a whole JSON output
    /// file. The stored options (format, tolerance, seed) are used.
    Run(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    SchrodingerAb,
    SchrodingerMs,
    Dirac,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Dims {
    #[value(name = "radial")]
    #[serde(rename = "radial")]
    Radial,
    #[value(name = "2d")]
    #[serde(rename = "2d")]
    Two,
    #[value(name = "3d")]
    #[serde(rename = "3d")]
    Three,
}

/// Inclusive channel range `lo..hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelRange {
    pub lo: i64,
    pub hi: i64,
}

impl ChannelRange {
    pub fn range(self) -> RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

fn parse_range(s: &str) -> Result<ChannelRange, String> {
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("bad channel bound '{t}'"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty channel range {lo}..{hi}"));
    }
    Ok(ChannelRange { lo, hi })
}

fn parse_angle(s: &str) -> Result<f64, String> {
    Angle::parse(s).map(Angle::radians).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PhysicsArgs {
    #[arg(long, value_enum, default_value_t = Problem::SchrodingerMs)]
    pub problem: Problem,
    #[arg(long, value_enum, default_value_t = Dims::Two)]
    pub dims: Dims,
    /// e|B|/cħ of the uniform field (forced to 0 for schrodinger-ab).
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Fractional part μ ∈ [0, 1) of ε_B times the flux.
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    /// Integer part φ₀ of ε_B times the flux.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub phi0: i64,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub eps_b: i8,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub eps_q: i8,
    /// Length scale of the AB boundary conditions.
    #[arg(long, default_value_t = 1.0)]
    pub kappa0: f64,
    /// Extension angle of channel l = 0 (radians or `pi/4`-style literals);
    /// for Dirac, the angle of the l = 0 channel.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub lambda0: Option<f64>,
    /// Extension angle of channel l = −1.
    #[arg(long = "lambda-1", value_parser = parse_angle, allow_hyphen_values = true)]
    pub lambda_m1: Option<f64>,
    /// Channels, e.g. `-5..5`.
    #[arg(long, default_value = "-5..5", value_parser = parse_range, allow_hyphen_values = true)]
    pub l: ChannelRange,
    /// Largest 2D level index n (radial problems: largest radial index).
    #[arg(long, default_value_t = 10)]
    pub nmax: u64,
    /// Electron mass (Dirac).
    #[arg(long, default_value_t = 1.0)]
    pub me: f64,
    /// Comma-separated p_z samples (3D and Dirac).
    #[arg(long, value_delimiter = ',', default_value = "0", allow_hyphen_values = true)]
    pub pz: Vec<f64>,
    /// Radial levels per sign and branch (Dirac).
    #[arg(long, default_value_t = 4)]
    pub window: u64,
    /// Mass M_s of the Schrödinger particle.
    #[arg(long, default_value_t = 1.0)]
    pub ms: f64,
    /// CSV of `p_z, lambda0[, lambda-1]` rows, linearly interpolated. For
    /// Dirac the columns are the angles for s = +1 and s = −1.
    #[arg(long)]
    pub lambda_table: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct EigenArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    /// Channel l of the level.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub channel: i64,
    /// Level index: radial m (MS radial), n (MS 2D/3D), rank of the
    /// negative level (AB), signed 𝔫 or k (Dirac).
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub index: i64,
    /// Spin label (Dirac).
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub s: i8,
    /// Continuum energy E ≥ 0 (AB only) instead of a bound level.
    #[arg(long)]
    pub energy: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub rho_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub rho_max: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// Suite name or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParam {
    #[value(name = "lambda", alias = "lambda0")]
    Lambda,
    #[value(name = "lambda-1")]
    LambdaM1,
    Mu,
    Pz,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    #[command(flatten)]
    pub physics: PhysicsArgs,
    #[arg(long, value_enum)]
    pub param: SweepParam,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
}

/// A fully specified job: what the output metadata records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobConfig {
    pub options: GlobalOpts,
    pub job: Command,
}

impl JobConfig {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("job config serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad job config: {e}")))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Solver(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Solver(Error::InvalidParameter(_) | Error::MissingExtension { .. } | Error::RegionMismatch { .. }) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

fn config_error<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

/// A table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i8> for Cell {
    fn from(v: i8) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Region> for Cell {
    fn from(v: Region) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<Option<Angle>> for Cell {
    fn from(v: Option<Angle>) -> Self {
        v.map_or(Cell::Null, |a| Cell::Num(a.radians()))
    }
}

/// 17 significant digits, so every binary64 value round-trips.
fn format_num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// `key = value` lines written after the data.
    pub notes: Vec<String>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), ..Default::default() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, config: &JobConfig) -> String {
        let mut out = format!("# solenoid {VERSION}\n# config = {}\n", config.to_json());
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            let fields = row.iter().map(|c| match c {
                Cell::Int(v) => v.to_string(),
                Cell::Num(v) => format_num(*v),
                Cell::Text(t) => t.clone(),
                Cell::Bool(b) => b.to_string(),
                Cell::Null => String::new(),
            });
            w.write_record(fields).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells"));
        for n in &self.notes {
            out.push_str("# ");
            out.push_str(n);
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, config: &JobConfig) -> String {
        let s = |t: &str| serde_json::to_string(t).expect("string serializes");
        let columns: Vec<String> = self.columns.iter().map(|c| s(c)).collect();
        let notes: Vec<String> = self.notes.iter().map(|n| s(n)).collect();
        let mut out = format!(
            "{{\"meta\":{{\"version\":{},\"config\":{},\"columns\":[{}],\"notes\":[{}]}},\n\"data\":[",
            s(VERSION),
            config.to_json(),
            columns.join(","),
            notes.join(",")
        );
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str(if i == 0 { "\n" } else { ",\n" });
            let fields: Vec<String> = row
                .iter()
                .zip(&columns)
                .map(|(c, name)| {
                    let v = match c {
                        Cell::Int(v) => v.to_string(),
                        Cell::Num(v) if v.is_finite() => format_num(*v),
                        Cell::Num(_) | Cell::Null => "null".into(),
                        Cell::Text(t) => s(t),
                        Cell::Bool(b) => b.to_string(),
                    };
                    format!("{name}:{v}")
                })
                .collect();
            out.push('{');
            out.push_str(&fields.join(","));
            out.push('}');
        }
        out.push_str("\n]}\n");
        out
    }
}

/// Result of a job: the table and whether any verification failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub table: Table,
    pub failed: bool,
}

impl Output {
    fn ok(table: Table) -> Self {
        Output { table, failed: false }
    }
}

/// Parses `args` (including the program name), runs the job and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run_cli(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run_cli(cli: &Cli) -> Result<i32, CliError> {
    let job = resolve(JobConfig { options: cli.options.clone(), job: cli.command.clone() })?;
    let output = execute(&job)?;
    let text = match job.options.format {
        Format::Csv => output.table.to_csv(&job),
        Format::Json => output.table.to_json(&job),
    };
    match &cli.out {
        Some(path) => fs::write(path, text).map_err(|source| io_error(path, source))?,
        None => match io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => return Err(io_error(Path::new("<stdout>"), e)),
            _ => {}
        },
    }
    Ok(if output.failed { 1 } else { 0 })
}

fn io_error(path: &Path, source: io::Error) -> CliError {
    CliError::Io { path: path.display().to_string(), source }
}

/// Replaces a `run` job by the stored job it points to.
pub fn resolve(mut job: JobConfig) -> Result<JobConfig, CliError> {
    for _ in 0..8 {
        let Command::Run(r) = &job.job else { return Ok(job) };
        let text = fs::read_to_string(&r.config).map_err(|source| io_error(&r.config, source))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("bad job config: {e}")))?;
        // Accept a bare job or a whole JSON output file.
        let inner = value.get("meta").and_then(|m| m.get("config")).cloned().unwrap_or(value);
        job = serde_json::from_value(inner).map_err(|e| CliError::Config(format!("bad job config: {e}")))?;
    }
    config_error("run configs nest too deeply")
}

/// Runs a resolved job.
pub fn execute(job: &JobConfig) -> Result<Output, CliError> {
    let qcfg = QuadratureConfig { rel_tol: job.options.tol, ..Default::default() };
    qcfg.validate()?;
    match &job.job {
        Command::Spectrum(p) => Ok(Output::ok(spectrum_table(p)?)),
        Command::Eigenfunction(e) => Ok(Output::ok(eigenfunction_table(e, &qcfg)?)),
        Command::Verify(v) => verify_table(&v.suite, job.options.seed, &qcfg),
        Command::Sweep(s) => Ok(Output::ok(sweep_table(s)?)),
        Command::Run(_) => config_error("unresolved run job"),
    }
}

impl PhysicsArgs {
    pub fn flux(&self) -> Result<FluxConfig, CliError> {
        if !(0.0..1.0).contains(&self.mu) {
            return config_error(format!("--mu must lie in [0, 1), got {}", self.mu));
        }
        let gamma = if self.problem == Problem::SchrodingerAb { 0.0 } else { self.gamma };
        let phi = self.eps_b as f64 * (self.phi0 as f64 + self.mu);
        let cfg = FluxConfig::new(phi, self.eps_b, self.eps_q, gamma)?.with_kappa0(self.kappa0)?;
        Ok(FluxConfig { phi0: self.phi0, mu: self.mu, ..cfg })
    }

    pub fn extension(&self) -> Result<ExtensionChoice, CliError> {
        let angle = |v: Option<f64>| v.map(Angle::new).transpose();
        let mut choice = ExtensionChoice::constant(angle(self.lambda0)?, angle(self.lambda_m1)?);
        if let Some(path) = &self.lambda_table {
            let (t0, t1) = read_angle_table(path)?;
            if self.problem == Problem::Dirac {
                let (a, b) = (t0.clone(), t1.clone());
                choice = choice.with_dirac(move |s, pz| {
                    let t = if s == 1 { &a } else { b.as_ref().unwrap_or(&a) };
                    t.at(pz).ok()
                });
            }
            choice = choice.with_pz(move |l, pz| match l {
                0 => t0.at(pz).ok(),
                -1 => t1.as_ref()?.at(pz).ok(),
                _ => None,
            });
        }
        Ok(choice)
    }

    fn check(&self) -> Result<(), CliError> {
        if self.pz.is_empty() || self.pz.iter().any(|p| !p.is_finite()) {
            return config_error("--pz needs finite values");
        }
        if !(self.ms > 0.0 && self.ms.is_finite()) {
            return config_error(format!("--ms must be positive, got {}", self.ms));
        }
        Ok(())
    }

    fn dirac_family(&self) -> Result<DiracFamily, CliError> {
        let flux = self.flux()?;
        Ok(DiracFamily { m_e: self.me, mu: flux.mu, gamma: flux.gamma, eps: flux.eps })
    }
}

fn read_angle_table(path: &Path) -> Result<(AngleTable, Option<AngleTable>), CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let (mut first, mut second) = (Vec::new(), Vec::new());
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let bad = |what: &str| CliError::Config(format!("{} row {}: {what}", path.display(), i + 1));
        let pz: f64 = rec.get(0).and_then(|t| t.parse().ok()).ok_or_else(|| bad("bad p_z"))?;
        let a = rec.get(1).ok_or_else(|| bad("missing angle"))?;
        first.push((pz, parse_angle(a).map_err(|e| bad(&e))?));
        if let Some(b) = rec.get(2).filter(|t| !t.is_empty()) {
            second.push((pz, parse_angle(b).map_err(|e| bad(&e))?));
        }
    }
    let second = if second.is_empty() { None } else { Some(AngleTable::new(second)?) };
    Ok((AngleTable::new(first)?, second))
}

pub fn spectrum_table(p: &PhysicsArgs) -> Result<Table, CliError> {
    p.check()?;
    let flux = p.flux()?;
    let choice = p.extension()?;
    match p.problem {
        Problem::SchrodingerMs => ms_spectrum(p, &flux, &choice),
        Problem::SchrodingerAb => ab_spectrum(p, &flux, &choice),
        Problem::Dirac => dirac_spectrum(p, &choice),
    }
}

fn ms_spectrum(p: &PhysicsArgs, flux: &FluxConfig, choice: &ExtensionChoice) -> Result<Table, CliError> {
    match p.dims {
        Dims::Radial => {
            let m_max = u32::try_from(p.nmax).map_err(|_| CliError::Config("--nmax too large".into()))?;
            let mut t = Table::new(&["l", "m", "E", "weight", "region", "lambda"]);
            for l in p.l.range() {
                for v in ms_radial::discrete_spectrum(l, flux, choice.channel_angle(l, 0.0), m_max)? {
                    t.push(vec![l.into(), (v.m as u64).into(), v.energy.into(), v.weight.into(), v.tag.region.into(), v.lambda.into()]);
                }
            }
            t.notes.push("energies in operator units (2D energy times M_s)".into());
            Ok(t)
        }
        Dims::Two => {
            let mut t = Table::new(&["n", "l", "m", "E", "weight", "region", "lambda"]);
            for v in assembly::spectrum_2d(flux, choice, p.ms, p.l.range(), p.nmax)? {
                t.push(vec![v.n.into(), v.l.into(), v.m.into(), v.energy.into(), v.radial.weight.into(), v.region.into(), v.lambda.into()]);
            }
            Ok(t)
        }
        Dims::Three => {
            let mut t = Table::new(&["p_z", "n", "l", "m", "E", "E_perp", "region", "lambda"]);
            for v in assembly::spectrum_3d(flux, choice, p.ms, &p.pz, p.l.range(), p.nmax)? {
                let tr = &v.transverse;
                t.push(vec![v.p_z.into(), tr.n.into(), tr.l.into(), tr.m.into(), v.energy.into(), tr.energy.into(), tr.region.into(), tr.lambda.into()]);
            }
            t.notes.push(format!("continuum_from = {}", format_num(assembly::ms_continuum_onset(flux, p.ms))));
            Ok(t)
        }
    }
}

fn ab_spectrum(p: &PhysicsArgs, flux: &FluxConfig, choice: &ExtensionChoice) -> Result<Table, CliError> {
    let mut t;
    match p.dims {
        Dims::Radial => {
            t = Table::new(&["l", "E", "region", "lambda"]);
            for l in p.l.range() {
                let s = ab_radial::spectrum(l, flux, choice.channel_angle(l, 0.0))?;
                for b in &s.bound_states {
                    t.push(vec![l.into(), b.energy.into(), b.region.into(), Some(b.lambda).into()]);
                }
            }
        }
        Dims::Two => {
            t = Table::new(&["l", "E", "region", "lambda"]);
            for b in assembly::spectrum_2d_ab(flux, choice, p.ms)?.bound {
                t.push(vec![b.l.into(), b.energy.into(), b.state.region.into(), Some(b.state.lambda).into()]);
            }
        }
        Dims::Three => {
            t = Table::new(&["p_z", "l", "E", "E_perp", "region", "lambda"]);
            for (pz, b, e) in assembly::spectrum_3d_ab(flux, choice, p.ms, &p.pz)? {
                t.push(vec![pz.into(), b.l.into(), e.into(), b.energy.into(), b.state.region.into(), Some(b.state.lambda).into()]);
            }
        }
    }
    t.notes.push("continuum_from = 0".into());
    Ok(t)
}

fn dirac_spectrum(p: &PhysicsArgs, choice: &ExtensionChoice) -> Result<Table, CliError> {
    let fam = p.dirac_family()?;
    let pz: &[f64] = if p.dims == Dims::Three { &p.pz } else { &[0.0] };
    let mut t = Table::new(&["p_z", "s", "l", "n", "sigma", "E", "weight", "region", "lambda"]);
    for b in assembly::dirac_full_spectrum(&fam, choice, pz, p.l.range(), p.window)? {
        let v = &b.level;
        t.push(vec![b.p_z.into(), b.s.into(), b.l.into(), v.n.into(), v.sigma.into(), v.energy.into(), v.weight.into(), v.region.into(), v.lambda.into()]);
    }
    Ok(t)
}

fn radial_grid(e: &EigenArgs) -> Result<Vec<f64>, CliError> {
    if !(e.rho_min > 0.0 && e.rho_max > e.rho_min && e.rho_max.is_finite()) {
        return config_error("need 0 < --rho-min < --rho-max");
    }
    if e.points < 2 {
        return config_error("--points must be at least 2");
    }
    let h = (e.rho_max - e.rho_min) / (e.points - 1) as f64;
    Ok((0..e.points).map(|i| if i + 1 == e.points { e.rho_max } else { e.rho_min + h * i as f64 }).collect())
}

fn unknown_level<T>(what: String) -> Result<T, CliError> {
    config_error(format!("no such level: {what}"))
}

fn norm_note(f: impl Fn(f64) -> f64, tail: TailDecay, qcfg: &QuadratureConfig) -> Result<String, CliError> {
    let v = quad_semi_infinite(f, &qcfg.with_tail(tail))?;
    Ok(format!("norm = {}", format_num(v.value)))
}

fn complex_row(rho: f64, z: &[Complex64]) -> Vec<Cell> {
    let mut row = vec![Cell::Num(rho)];
    for c in z {
        row.push(c.re.into());
        row.push(c.im.into());
    }
    row
}

pub fn eigenfunction_table(e: &EigenArgs, qcfg: &QuadratureConfig) -> Result<Table, CliError> {
    let p = &e.physics;
    p.check()?;
    let grid = radial_grid(e)?;
    let flux = p.flux()?;
    let choice = p.extension()?;
    let pz = p.pz[0];
    let energy_note = |x: f64| format!("E = {}", format_num(x));
    match p.problem {
        Problem::SchrodingerMs => {
            let index = u64::try_from(e.index).map_err(|_| CliError::Config("--index must be >= 0".into()))?;
            match p.dims {
                Dims::Radial => {
                    let m = u32::try_from(index).map_err(|_| CliError::Config("--index too large".into()))?;
                    let levels = ms_radial::discrete_spectrum(e.channel, &flux, choice.channel_angle(e.channel, 0.0), m)?;
                    let Some(v) = levels.into_iter().find(|v| v.m == m) else {
                        return unknown_level(format!("l = {}, m = {m}", e.channel));
                    };
                    let mut t = Table::new(&["rho", "u"]);
                    for &r in &grid {
                        t.push(vec![r.into(), v.eval(r).into()]);
                    }
                    t.notes.push(energy_note(v.energy));
                    t.notes.push(norm_note(|r| v.eval(r).powi(2), TailDecay::Gaussian, qcfg)?);
                    Ok(t)
                }
                Dims::Two | Dims::Three => {
                    let ch = e.channel..=e.channel;
                    let found = if p.dims == Dims::Two {
                        assembly::spectrum_2d(&flux, &choice, p.ms, ch, index)?.into_iter().find(|v| v.n == index).map(|v| (v, v.energy))
                    } else {
                        assembly::spectrum_3d(&flux, &choice, p.ms, &[pz], ch, index)?
                            .into_iter()
                            .find(|v| v.transverse.n == index)
                            .map(|v| (v.transverse, v.energy))
                    };
                    let Some((v, energy)) = found else {
                        return unknown_level(format!("l = {}, n = {index}", e.channel));
                    };
                    let mut t = Table::new(&["rho", "re", "im"]);
                    for &r in &grid {
                        let psi = v.eval(r, e.phi);
                        let psi = if p.dims == Dims::Three {
                            psi * Complex64::from_polar((2.0 * std::f64::consts::PI).sqrt().recip(), pz * e.z)
                        } else {
                            psi
                        };
                        t.push(complex_row(r, &[psi]));
                    }
                    t.notes.push(energy_note(energy));
                    t.notes.push(norm_note(|r| v.radial.eval(r).powi(2), TailDecay::Gaussian, qcfg)?);
                    Ok(t)
                }
            }
        }
        Problem::SchrodingerAb => {
            let l = e.channel;
            let lambda = choice.channel_angle(l, if p.dims == Dims::Three { pz } else { 0.0 });
            let ms = if p.dims == Dims::Radial { 1.0 } else { p.ms };
            let plane = |z: f64| {
                if p.dims == Dims::Three {
                    Complex64::from_polar((2.0 * std::f64::consts::PI).sqrt().recip(), pz * z)
                } else {
                    Complex64::new(1.0, 0.0)
                }
            };
            let phase = Complex64::from_polar(1.0, flux.eps as f64 * (flux.phi0 - l) as f64 * e.phi);
            let (radial, mut notes): (Box<dyn Fn(f64) -> Result<f64, Error>>, Vec<String>) = match e.energy {
                Some(en) => {
                    let op_energy = ms * en;
                    let cfg = flux;
                    let scale = ms.sqrt();
                    let f = move |r: f64| Ok(scale * ab_radial::continuous_eigenfunction(l, &cfg, lambda, op_energy, r)?);
                    f(1.0)?;
                    (Box::new(f), vec![energy_note(en), "continuum function, normalized to delta(E - E')".into()])
                }
                None => {
                    let lam = lambda.ok_or(Error::MissingExtension { l })?;
                    let states = ab_radial::spectrum(l, &flux, Some(lam))?.bound_states;
                    let Some(b) = usize::try_from(e.index).ok().and_then(|i| states.get(i).copied()) else {
                        return unknown_level(format!("AB bound level {} in channel {l}", e.index));
                    };
                    let norm = norm_note(|r| b.eval(r).powi(2), TailDecay::Exponential, qcfg)?;
                    (Box::new(move |r| Ok(b.eval(r))), vec![energy_note(b.energy / ms), norm])
                }
            };
            let mut t = if p.dims == Dims::Radial { Table::new(&["rho", "u"]) } else { Table::new(&["rho", "re", "im"]) };
            for &r in &grid {
                let u = radial(r)?;
                if p.dims == Dims::Radial {
                    t.push(vec![r.into(), u.into()]);
                } else {
                    let psi = phase * plane(e.z) * (u / (2.0 * std::f64::consts::PI * r).sqrt());
                    t.push(complex_row(r, &[psi]));
                }
            }
            t.notes.append(&mut notes);
            Ok(t)
        }
        Problem::Dirac => {
            let fam = p.dirac_family()?;
            let pz = if p.dims == Dims::Three { pz } else { 0.0 };
            let params = DiracParams::new(fam.m_e, pz, e.s, e.channel, fam.mu, fam.gamma, fam.eps)?;
            let lambda = if params.region() == Region::R3 { choice.dirac_angle(e.s, pz) } else { None };
            let window = e.index.unsigned_abs() + 1;
            let Some(level) = dirac_radial::spectrum(&params, lambda, window)?.into_iter().find(|v| v.n == e.index) else {
                return unknown_level(format!("s = {}, l = {}, n = {}", e.s, e.channel, e.index));
            };
            let mut t;
            if p.dims == Dims::Radial {
                t = Table::new(&["rho", "f", "g"]);
                for &r in &grid {
                    let d = level.eval(r)?;
                    t.push(vec![r.into(), d.f.into(), d.g.into()]);
                }
            } else {
                t = Table::new(&["rho", "re1", "im1", "re2", "im2", "re3", "im3", "re4", "im4"]);
                let spinor = assembly::dirac_spinor(level, flux.phi0);
                for &r in &grid {
                    t.push(complex_row(r, &spinor.eval(r, e.phi, e.z)?));
                }
            }
            t.notes.push(energy_note(level.energy));
            t.notes.push(norm_note(|r| level.eval_or_nan(r).norm_sqr(), TailDecay::Gaussian, qcfg)?);
            Ok(t)
        }
    }
}

pub fn verify_table(suite: &str, seed: u64, qcfg: &QuadratureConfig) -> Result<Output, CliError> {
    if suite != "all" && !suites::SUITES.contains(&suite) {
        return config_error(format!("unknown suite '{suite}'; expected one of {} or all", suites::SUITES.join(", ")));
    }
    let reports = suites::run(suite, seed, qcfg)?;
    let mut t = Table::new(&["suite", "item", "deviation", "threshold", "pass"]);
    let mut failed = false;
    for r in &reports {
        for (item, v) in &r.details {
            let pass = v.abs() <= r.threshold;
            t.push(vec![r.check_name.as_str().into(), item.as_str().into(), (*v).into(), r.threshold.into(), Cell::Bool(pass)]);
        }
        failed |= !r.pass;
        t.notes.push(format!(
            "{}: {} (max deviation {}, threshold {})",
            r.check_name,
            if r.pass { "PASS" } else { "FAIL" },
            format_num(r.max_abs_deviation),
            format_num(r.threshold)
        ));
    }
    Ok(Output { table: t, failed })
}

pub fn sweep_table(s: &SweepArgs) -> Result<Table, CliError> {
    if s.steps == 0 {
        return config_error("--steps must be positive");
    }
    let name = match s.param {
        SweepParam::Lambda => "lambda0",
        SweepParam::LambdaM1 => "lambda_m1",
        SweepParam::Mu => "mu",
        SweepParam::Pz => "p_z",
    };
    let mut out: Option<Table> = None;
    for i in 0..s.steps {
        let v = if s.steps == 1 { s.from } else { s.from + (s.to - s.from) * i as f64 / (s.steps - 1) as f64 };
        let mut p = s.physics.clone();
        match s.param {
            SweepParam::Lambda => p.lambda0 = Some(Angle::new(v)?.radians()),
            SweepParam::LambdaM1 => p.lambda_m1 = Some(Angle::new(v)?.radians()),
            SweepParam::Mu => p.mu = v,
            SweepParam::Pz => p.pz = vec![v],
        }
        let t = spectrum_table(&p)?;
        let acc = out.get_or_insert_with(|| {
            let mut cols = vec![name.to_string()];
            cols.extend(t.columns.iter().cloned());
            Table { columns: cols, rows: Vec::new(), notes: t.notes.clone() }
        });
        for mut row in t.rows {
            row.insert(0, Cell::Num(v));
            acc.rows.push(row);
        }
    }
    Ok(out.expect("at least one step"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> JobConfig {
        let cli = Cli::try_parse_from(std::iter::once("solenoid").chain(args.iter().copied())).unwrap();
        JobConfig { options: cli.options, job: cli.command }
    }

    fn table(args: &[&str]) -> Table {
        execute(&parse(args)).unwrap().table
    }

    fn column(t: &Table, name: &str) -> Vec<f64> {
        let i = t.columns.iter().position(|c| c == name).unwrap();
        t.rows
            .iter()
            .map(|r| match &r[i] {
                Cell::Num(v) => *v,
                Cell::Int(v) => *v as f64,
                _ => f64::NAN,
            })
            .collect()
    }

    #[test]
    fn config_round_trip() {
        let job = parse(&[
            "spectrum", "--problem", "schrodinger-ms", "--gamma", "1", "--mu", "0.3", "--lambda0", "0.2", "--lambda-1", "-pi/4",
            "--l", "-5..5", "--nmax", "10", "--pz", "0.1,-0.7", "--format", "json",
        ]);
        let text = job.to_json();
        let back = JobConfig::from_json(&text).unwrap();
        assert_eq!(back, job);
        assert_eq!(back.to_json(), text);
        let Command::Spectrum(p) = &job.job else { panic!() };
        assert_eq!(p.lambda_m1, Some(-std::f64::consts::FRAC_PI_4));
        assert_eq!(p.pz, vec![0.1, -0.7]);
    }

    #[test]
    fn ms_table_is_sorted_and_complete() {
        let t = table(&["spectrum", "--gamma", "1", "--mu", "0.3", "--lambda0", "0.2", "--lambda-1", "-0.4", "--l", "-5..5", "--nmax", "10"]);
        let n = column(&t, "n");
        let l = column(&t, "l");
        assert!(!t.rows.is_empty());
        for w in n.iter().zip(&l).collect::<Vec<_>>().windows(2) {
            assert!((w[0].0, w[0].1) < (w[1].0, w[1].1));
        }
        assert!(n.iter().all(|&v| v <= 10.0));
    }

    #[test]
    fn dirac_ladder_at_zero_flux() {
        let t = table(&["spectrum", "--problem", "dirac", "--mu", "0", "--gamma", "1", "--me", "1", "--pz", "0", "--window", "8", "--lambda0", "pi/2"]);
        let e = column(&t, "E");
        let n = column(&t, "n");
        assert!(!e.is_empty());
        for (e, n) in e.iter().zip(&n) {
            assert!((e.abs() - (1.0 + 2.0 * n.abs()).sqrt()).abs() < 1e-12, "{e} {n}");
        }
    }

    #[test]
    fn missing_extension_is_a_config_error() {
        let job = parse(&["spectrum", "--mu", "0.3", "--lambda0", "0.2"]);
        let err = execute(&job).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("l_a in {0, -1}"), "{err}");
        assert_eq!(run(["solenoid", "spectrum", "--mu", "0.3"]), 2);
    }

    #[test]
    fn unknown_level_and_suite() {
        let job = parse(&["eigenfunction", "--problem", "schrodinger-ab", "--dims", "radial", "--mu", "0.5", "--lambda0", "pi/4", "--lambda-1", "0"]);
        assert_eq!(execute(&job).unwrap_err().exit_code(), 2);
        let job = parse(&["verify", "--suite", "nope"]);
        assert_eq!(execute(&job).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn dirac_eigenfunction_norm_footer() {
        let t = table(&["eigenfunction", "--problem", "dirac", "--dims", "radial", "--mu", "0.3", "--gamma", "1", "--channel", "-2", "--index", "1"]);
        assert_eq!(t.columns, ["rho", "f", "g"]);
        let norm = t.notes.iter().find_map(|n| n.strip_prefix("norm = ")).unwrap().parse::<f64>().unwrap();
        assert!((norm - 1.0).abs() < 1e-8, "{norm}");
    }

    #[test]
    fn lambda_sweep_is_monotone_and_continuous() {
        let t = table(&[
            "sweep", "--problem", "schrodinger-ms", "--dims", "radial", "--gamma", "1", "--mu", "0", "--l", "0", "--nmax", "0",
            "--param", "lambda", "--from", "-1.5", "--to", "1.5", "--steps", "50",
        ]);
        let e = column(&t, "E");
        assert_eq!(e.len(), 50);
        let steps: Vec<f64> = e.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(steps.iter().all(|&d| d > 0.0) || steps.iter().all(|&d| d < 0.0), "{e:?}");
        // Continuity: the level at every midpoint lies between its neighbours.
        let flux = FluxConfig::from_mantissa(0.0, 1.0).unwrap();
        let lam = column(&t, "lambda0");
        for i in 0..49 {
            let mid = Angle::new(0.5 * (lam[i] + lam[i + 1])).unwrap();
            let m = ms_radial::discrete_spectrum(0, &flux, Some(mid), 0).unwrap()[0].energy;
            assert!((m - e[i]) * (m - e[i + 1]) < 0.0, "{i}: {m} not between {} and {}", e[i], e[i + 1]);
        }
    }

    #[test]
    fn csv_and_json_layout() {
        let job = parse(&["spectrum", "--problem", "schrodinger-ab", "--dims", "2d", "--mu", "0", "--lambda0", "0"]);
        let t = execute(&job).unwrap().table;
        let csv = t.to_csv(&job);
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("# solenoid "));
        assert!(lines.next().unwrap().starts_with("# config = {"));
        assert_eq!(lines.next().unwrap(), "l,E,region,lambda");
        assert_eq!(lines.next().unwrap(), "0,-1.2609470067487736e0,R3,0.0000000000000000e0");
        let json: serde_json::Value = serde_json::from_str(&t.to_json(&job)).unwrap();
        assert_eq!(json["meta"]["version"], VERSION);
        assert_eq!(JobConfig::deserialize(&json["meta"]["config"]).unwrap(), job);
        assert_eq!(json["data"][0]["region"], "R3");
    }
}
