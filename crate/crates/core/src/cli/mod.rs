//! Command-line front end.

mod config;
mod experiments;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{emit_config, load_config, parse_config, parse_sweep, FadingKind, OutputFormat, RunConfig};
pub use report::{Check, Report};

use crate::error::{Error, Result};
use crate::propagation::GainKind;
use crate::validation;

#[derive(Debug, Parser)]
#[command(name = "secgraph", version, about = "Secrecy graphs on Poisson networks: simulation against analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// In- and out-degree PMFs
    Degree(Flags),
    /// Isolation probabilities over a grid of λ_e/λ_ℓ
    Isolation(Flags),
    /// Mean degree with a secrecy threshold over a grid of ϱ
    Threshold(Flags),
    /// Out-degree with sectorized transmission
    Sectors(Flags),
    /// Mean degree with eavesdropper neutralization over a grid of radii
    Neutralize(Flags),
    /// Secrecy-rate CDF to the i-th neighbour
    Msr(Flags),
    /// Colluding eavesdroppers (outage, power law, or degree vs b with --sweep-b)
    Collude(Flags),
    /// Moments of the typical Voronoi cell area
    Voronoi(Flags),
    /// Full acceptance suite
    Selftest(Flags),
}

impl Command {
    fn parts(&self) -> (&'static str, &Flags) {
        match self {
            Command::Degree(f) => ("degree", f),
            Command::Isolation(f) => ("isolation", f),
            Command::Threshold(f) => ("threshold", f),
            Command::Sectors(f) => ("sectors", f),
            Command::Neutralize(f) => ("neutralize", f),
            Command::Msr(f) => ("msr", f),
            Command::Collude(f) => ("collude", f),
            Command::Voronoi(f) => ("voronoi", f),
            Command::Selftest(f) => ("selftest", f),
        }
    }
}

#[derive(Debug, Args)]
struct Flags {
    /// Legitimate node density (nodes per unit area)
    #[arg(long)]
    lambda_l: Option<f64>,
    /// Eavesdropper density (nodes per unit area)
    #[arg(long)]
    lambda_e: Option<f64>,
    /// Amplitude loss exponent (power decays as r^-2b)
    #[arg(long)]
    b: Option<f64>,
    /// Gain model
    #[arg(long, value_enum)]
    gain: Option<GainKind>,
    /// Transmit power P_ℓ
    #[arg(long)]
    power: Option<f64>,
    /// Noise power at legitimate receivers
    #[arg(long)]
    sigma2_l: Option<f64>,
    /// Noise power at eavesdroppers
    #[arg(long)]
    sigma2_e: Option<f64>,
    /// Secrecy rate threshold (bits per complex dimension)
    #[arg(long)]
    rho: Option<f64>,
    /// Fading model
    #[arg(long, value_enum)]
    fading: Option<FadingKind>,
    /// Nakagami shape m
    #[arg(long)]
    nakagami_m: Option<f64>,
    /// Log-normal shadowing σ_s
    #[arg(long)]
    sigma_s: Option<f64>,
    /// Transmission sectors L (sectors)
    #[arg(long)]
    sectors: Option<u32>,
    /// Neighbour rank i (msr)
    #[arg(long)]
    neighbor: Option<u32>,
    /// Legitimate link length r_ℓ (collude)
    #[arg(long)]
    link_length: Option<f64>,
    /// Comma-separated sweep values; meaning depends on the subcommand
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    grid: Option<Vec<f64>>,
    /// Amplitude loss exponent sweep start:stop:step (collude)
    #[arg(long)]
    sweep_b: Option<String>,
    /// Highest area moment (voronoi)
    #[arg(long)]
    k_max: Option<u32>,
    /// Trials per estimate
    #[arg(long)]
    trials: Option<u64>,
    /// Base seed [default: $SECGRAPH_SEED, else 1]
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads [default: all cores]
    #[arg(long)]
    threads: Option<usize>,
    /// Output file
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Exit with status 3 if any comparison misses its tolerance
    #[arg(long)]
    check: bool,
    /// TOML configuration file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Exit statuses.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;
pub const EXIT_CHECK: i32 = 3;

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::DivergentAggregate(_) => EXIT_USAGE,
        Error::Numeric(_) | Error::WindowExhausted(_) => EXIT_FAILURE,
    }
}

/// Builds the run configuration: file values, then flags, then the
/// `SECGRAPH_SEED` fallback for the seed.
fn resolve(name: &str, f: &Flags) -> Result<RunConfig> {
    let mut rc = match &f.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(exp) = &rc.experiment {
        if exp != name {
            return Err(Error::InvalidArgument(format!("config is for experiment {exp:?}, not {name:?}")));
        }
    }
    rc.experiment = Some(name.to_string());
    macro_rules! set {
        ($($field:ident),*) => { $( if let Some(v) = f.$field.clone() { rc.$field = v; } )* };
    }
    set!(lambda_l, lambda_e, b, gain, power, sigma2_l, sigma2_e, rho, fading, nakagami_m, sigma_s, sectors, neighbor);
    set!(link_length, grid, k_max, format);
    if f.sweep_b.is_some() {
        rc.sweep_b = f.sweep_b.clone();
    }
    if f.trials.is_some() {
        rc.trials = f.trials;
    }
    if f.out.is_some() {
        rc.out = f.out.clone();
    }
    if f.seed.is_some() {
        rc.seed = f.seed;
    }
    if rc.seed.is_none() {
        rc.seed = Some(match std::env::var("SECGRAPH_SEED") {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("SECGRAPH_SEED must be an unsigned integer (got {s:?})")))?,
            Err(_) => 1,
        });
    }
    rc.validate()?;
    Ok(rc)
}

fn dispatch(name: &str, rc: &RunConfig) -> Result<Report> {
    match name {
        "degree" => experiments::degree(rc),
        "isolation" => experiments::isolation(rc),
        "threshold" => experiments::threshold(rc),
        "sectors" => experiments::sectors(rc),
        "neutralize" => experiments::neutralize(rc),
        "msr" => experiments::msr(rc),
        "collude" => experiments::collude(rc),
        "voronoi" => experiments::voronoi(rc),
        other => Err(Error::InvalidArgument(format!("unknown experiment {other:?}"))),
    }
}

fn selftest(rc: &RunConfig) -> Result<Report> {
    let mut r = Report::new(&["criterion", "pass"]);
    let results = validation::run_all(rc.seed.unwrap_or(1), |c| println!("{c}"));
    for c in &results {
        r.row(vec![c.id as f64, f64::from(c.pass)]);
        r.check(Check::at_least(format!("criterion {} {}", c.id, c.name), 1.0, f64::from(c.pass), 0.0));
    }
    Ok(r)
}

fn execute(cli: Cli) -> Result<i32> {
    let (name, flags) = cli.command.parts();
    let rc = resolve(name, flags)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(flags.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Numeric(format!("thread pool: {e}")))?;
    let report = pool.install(|| if name == "selftest" { selftest(&rc) } else { dispatch(name, &rc) })?;
    print!("{}", report.summary_table());
    if let Some(path) = &rc.out {
        report.write(&rc, path)?;
    }
    Ok(if flags.check && !report.pass() || name == "selftest" && !report.pass() { EXIT_CHECK } else { EXIT_OK })
}

/// Runs the CLI on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
