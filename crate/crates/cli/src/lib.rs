//! `audit`: command-line front end for the inequality audits and the
//! warped-product geometry checks.
//!
//! Exit codes: `0` clean, `1` usage, hypothesis or format error, `2` an
//! inequality violation was found.

mod commands;
mod report;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Serialize, Serializer};
use warpineq::geom::{GeomError, LaplacianSign};
use warpineq::ineq::AuditError;
use warpineq::linalg::LinalgError;

pub use commands::{cmd_geometry, cmd_matrix_audit, cmd_sweep, cmd_verify_file};
pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    MatrixAudit,
    Geometry,
    Sweep,
    VerifyFile,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Inclusive dimension range written `A..B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimRange {
    pub lo: u64,
    pub hi: u64,
}

impl fmt::Display for DimRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl Serialize for DimRange {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl std::str::FromStr for DimRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad dimension range {s:?} (expected A..B or N)");
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
            None => (s, s),
        };
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok(DimRange { lo, hi })
    }
}

/// Everything one invocation depends on. Echoed verbatim into reports.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub check: Option<String>,
    pub dims: DimRange,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub model: Option<String>,
    pub grid: Vec<usize>,
    pub interpretation: String,
    pub laplacian_sign: LaplacianSign,
    pub geo_tol: f64,
    pub out_path: Option<PathBuf>,
    pub format: Format,
    pub artifact_dir: Option<PathBuf>,
    pub file: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            check: None,
            dims: DimRange { lo: 2, hi: 8 },
            trials: 1000,
            seed: 42,
            tol: 1e-9,
            model: None,
            grid: vec![5],
            interpretation: "floor_t1".into(),
            laplacian_sign: LaplacianSign::DivGrad,
            geo_tol: 1e-6,
            out_path: None,
            format: Format::Json,
            artifact_dir: None,
            file: None,
        }
    }

    /// `--artifact-dir`, else the directory of `--out`, else `.`.
    pub fn resolved_artifact_dir(&self) -> PathBuf {
        if let Some(d) = &self.artifact_dir {
            return d.clone();
        }
        match self.out_path.as_ref().and_then(|p| p.parent()) {
            Some(parent) if !parent.as_os_str().is_empty() => parent.to_path_buf(),
            _ => PathBuf::from("."),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Audit(AuditError),
    Geom(GeomError),
    Format(LinalgError),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Audit(e) => write!(f, "{e}"),
            CliError::Geom(e) => write!(f, "{e}"),
            CliError::Format(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<AuditError> for CliError {
    fn from(e: AuditError) -> Self {
        CliError::Audit(e)
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        CliError::Geom(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Parser)]
#[command(name = "audit", version, about = "Seeded audits of warped-product and singular-value inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Run a registered matrix check over random ensembles.
    MatrixAudit(Flags),
    /// Check the second-fundamental-form bound on a catalog immersion.
    Geometry(Flags),
    /// Deterministic sweep over v (checks: harmonic, chain).
    Sweep(Flags),
    /// Run a check against a matrix file.
    VerifyFile {
        file: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    check: Option<String>,
    /// Inclusive range `A..B`.
    #[arg(long)]
    dims: Option<String>,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    model: Option<String>,
    /// Points per axis: one count, or a comma list with one per axis.
    #[arg(long, default_value = "5")]
    grid: String,
    /// floor_t1, floor_tv, dim, or all (t0 only).
    #[arg(long, default_value = "floor_t1")]
    interpretation: String,
    #[arg(long, default_value = "divgrad")]
    laplacian_sign: String,
    /// Margin tolerance for geometry verdicts.
    #[arg(long, default_value_t = 1e-6)]
    geo_tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Where counterexamples are written.
    #[arg(long)]
    artifact_dir: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad grid {s:?} (expected N or N,N,...)")))
        })
        .collect()
}

fn config_from(command: Command, f: Flags, file: Option<PathBuf>) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::new(command);
    let default_dims = match (command, f.check.as_deref()) {
        (Command::Sweep, Some("chain")) => "2..10000",
        (Command::Sweep, _) => "2..1000000",
        _ => "2..8",
    };
    cfg.dims = f.dims.as_deref().unwrap_or(default_dims).parse().map_err(CliError::Usage)?;
    cfg.check = f.check;
    cfg.trials = f.trials;
    cfg.seed = f.seed;
    cfg.tol = f.tol;
    cfg.model = f.model;
    cfg.grid = parse_grid(&f.grid)?;
    cfg.interpretation = f.interpretation;
    cfg.laplacian_sign = f.laplacian_sign.parse().map_err(CliError::Usage)?;
    cfg.geo_tol = f.geo_tol;
    cfg.out_path = f.out;
    cfg.format = f.format;
    cfg.artifact_dir = f.artifact_dir;
    cfg.file = file;
    if !(cfg.tol >= 0.0) || !(cfg.geo_tol >= 0.0) {
        return Err(CliError::Usage("tolerances must be non-negative".into()));
    }
    Ok(cfg)
}

/// Parses arguments (program name first) into a [`RunConfig`].
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    let res = match cli.command {
        Sub::MatrixAudit(f) => config_from(Command::MatrixAudit, f, None),
        Sub::Geometry(f) => config_from(Command::Geometry, f, None),
        Sub::Sweep(f) => config_from(Command::Sweep, f, None),
        Sub::VerifyFile { file, flags } => config_from(Command::VerifyFile, flags, Some(file)),
    };
    res.map_err(|e| clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("{e}\n")))
}

/// Dispatches one configured command and returns its exit code.
pub fn execute(cfg: &RunConfig) -> i32 {
    let res = match cfg.command {
        Command::MatrixAudit => cmd_matrix_audit(cfg),
        Command::Geometry => cmd_geometry(cfg),
        Command::Sweep => cmd_sweep(cfg),
        Command::VerifyFile => cmd_verify_file(cfg),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

/// Full entry point: parse, run, map every failure to an exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_config(args) {
        Ok(cfg) => execute(&cfg),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
