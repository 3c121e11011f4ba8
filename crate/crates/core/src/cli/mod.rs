//! Command-line front end. Every subcommand is a thin adapter over a library
//! call; output is a single TSV table or JSON document.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Deserialize;
use thiserror::Error;

use crate::error::{Error, ErrorClass};

pub use config::Config;
pub use output::{Document, RunManifest};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "WITTKIT_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "wittkit",
    version,
    about = "Witt vectors, formal group laws and Artin-Mazur logarithms"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct GlobalOpts {
    /// Output format [default: tsv]
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Also write a run manifest (JSON) to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,
    /// TOML file presetting family, budget and format.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(ValueEnum, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Tsv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Coefficient extraction from the defining equations.
    Extraction,
    /// The closed binomial formula of the family.
    ClosedForm,
}

impl Method {
    fn as_str(self) -> &'static str {
        match self {
            Method::Extraction => "extraction",
            Method::ClosedForm => "closed-form",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the built-in families.
    Families,
    /// Big Witt vector arithmetic on explicit coordinates.
    Witt(WittArgs),
    /// Artin-Mazur logarithm coefficients a_1..a_M.
    AmLog(AmLogArgs),
    /// Formal group law of a family, with an integrality check.
    Fgl(FglArgs),
    /// Non-ordinary loci for every odd prime up to a bound.
    ScanOrdinary(ScanArgs),
    /// Picard-Fuchs congruences L a_k = 0 mod k, or the series solution check.
    PfCheck(PfArgs),
    /// Frobenius prime-power congruence a_{p^nu} = a_p a_{p^(nu-1)}^p mod p.
    Congruence(CongruenceArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Families => "families",
            Command::Witt(_) => "witt",
            Command::AmLog(_) => "am-log",
            Command::Fgl(_) => "fgl",
            Command::ScanOrdinary(_) => "scan-ordinary",
            Command::PfCheck(_) => "pf-check",
            Command::Congruence(_) => "congruence",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum WittOp {
    Ghost,
    FromGhost,
    Add,
    Sub,
    Mul,
    Neg,
    Frobenius,
    Verschiebung,
    Teichmueller,
}

#[derive(Args, Debug)]
pub struct WittArgs {
    #[arg(long, value_enum)]
    pub op: WittOp,
    /// Comma-separated coordinates (ghost components for from-ghost; a single
    /// polynomial for teichmueller).
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    /// Second operand for add, sub and mul.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Index of frobenius or verschiebung.
    #[arg(long)]
    pub m: Option<usize>,
    /// Length of a Teichmueller lift.
    #[arg(long)]
    pub len: Option<usize>,
}

#[derive(Args, Debug)]
pub struct AmLogArgs {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub mmax: usize,
    #[arg(long, value_enum, default_value = "extraction")]
    pub method: Method,
    /// Reduce coefficients into [0, N).
    #[arg(long = "mod", value_name = "N")]
    pub modulus: Option<BigInt>,
}

#[derive(Args, Debug)]
pub struct FglArgs {
    #[arg(long)]
    pub family: Option<String>,
    /// Total degree of the truncated law.
    #[arg(long)]
    pub deg: usize,
    /// Specialise the pencil parameter to this integer.
    #[arg(long, allow_hyphen_values = true)]
    pub at_x: Option<BigInt>,
    #[arg(long, value_enum, default_value = "extraction")]
    pub method: Method,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub family: Option<String>,
    /// Largest prime scanned.
    #[arg(long)]
    pub pmax: u64,
    /// Cross-check every fibre against point counts (elliptic families).
    #[arg(long)]
    pub oracle: bool,
    /// Maximum number of projective points per count [default: 993].
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct PfArgs {
    #[arg(long)]
    pub family: Option<String>,
    /// Check L a_k = 0 mod k for k = 1..KMAX.
    #[arg(long, required_unless_present = "series_order")]
    pub kmax: Option<usize>,
    /// Operator in theta-notation; defaults to the family's bundled operator.
    #[arg(long, allow_hyphen_values = true)]
    pub operator: Option<String>,
    /// Instead check L f = 0 through x^T for the holomorphic period f.
    #[arg(long, value_name = "T", conflicts_with = "kmax")]
    pub series_order: Option<usize>,
    #[arg(long, value_enum, default_value = "closed-form")]
    pub method: Method,
}

#[derive(Args, Debug)]
pub struct CongruenceArgs {
    #[arg(long)]
    pub family: Option<String>,
    /// Primes to test (repeat or comma-separate).
    #[arg(long = "p", required = true, value_delimiter = ',')]
    pub primes: Vec<u64>,
    #[arg(long, default_value_t = 2)]
    pub nu: u32,
    /// Logarithm truncation [default: largest p^nu].
    #[arg(long)]
    pub mmax: Option<usize>,
    #[arg(long, value_enum, default_value = "closed-form")]
    pub method: Method,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Math(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    /// 1 usage, 2 mathematical precondition, 3 budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math(e) => match e.class() {
                ErrorClass::Usage => 1,
                ErrorClass::Precondition => 2,
                ErrorClass::Budget => 3,
            },
            CliError::Usage(_) | CliError::Io { .. } => 1,
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize =
            v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
                CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))
            })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker threads: {e}")))
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn execute(cli: &Cli, argv: &[OsString], out: &mut dyn Write) -> Result<(), CliError> {
    let started = Instant::now();
    let config = match &cli.global.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let format = cli.global.format.or(config.format).unwrap_or(Format::Tsv);
    let pool = thread_pool()?;
    let doc = pool.install(|| commands::dispatch(&cli.command, &config))?;
    let bytes = doc.render(format).into_bytes();
    match &cli.global.out {
        Some(path) => write_file(path, &bytes)?,
        None => out.write_all(&bytes).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        })?,
    }
    if let Some(path) = &cli.global.manifest {
        let args = argv
            .iter()
            .skip(1)
            .map(|a| a.to_string_lossy().into_owned())
            .collect();
        let manifest = RunManifest::new(cli.command.name(), args, started.elapsed(), &bytes);
        write_file(path, manifest.to_json().as_bytes())?;
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the exit
/// status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                1
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match execute(&cli, &argv, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
