//! `superradiance` command-line driver.
//!
//! Writes figure data as CSV (`small-sample`, `cascade`, `trace-distance`) or
//! runs the oracle cross-checks and writes a JSON report (`crosscheck`).
//!
//! Exit codes: 0 success, 1 usage error, 2 capacity error, 3 cross-check failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::json;

use superradiance::crosscheck::{run_crosscheck, CrosscheckConfig};
use superradiance::figures::{cascade_table, small_sample_table, trace_distance_table, Engine, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    SmallSample,
    Cascade,
    TraceDistance,
    Crosscheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Brute,
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "superradiance", version, about = "Superradiant emission: figure data and oracle cross-checks")]
struct Args {
    #[arg(long, value_enum)]
    command: Command,

    /// Atom count, or a comma list for small-sample. For crosscheck: the
    /// largest N used in density-matrix comparisons.
    #[arg(long, value_delimiter = ',')]
    atoms: Vec<usize>,

    /// Half decay rate γ; the time axis is written as γt.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,

    /// Sample grid in time t (the CSV axis is γt).
    #[arg(long)]
    t_start: Option<f64>,
    #[arg(long)]
    t_stop: Option<f64>,
    #[arg(long)]
    t_points: Option<usize>,

    /// Click times (comma list); spread evenly over the grid when omitted.
    #[arg(long, value_delimiter = ',')]
    measure_times: Option<Vec<f64>>,

    #[arg(long, value_enum, default_value_t = EngineArg::Analytic)]
    engine: EngineArg,

    /// Seed for the random schedules of crosscheck.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Replaces the feed coefficient of the reduced generator (mutation check).
    #[arg(long, hide = true)]
    corrupt_feed: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] superradiance::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cross-check failed: {0}")]
    Crosscheck(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(superradiance::Error::Capacity { .. }) => 2,
            Failure::Crosscheck(_) => 3,
            _ => 1,
        }
    }
}

fn grid(args: &Args) -> Result<Option<Grid>, Failure> {
    if args.t_start.is_none() && args.t_stop.is_none() && args.t_points.is_none() {
        return Ok(None);
    }
    let stop = args
        .t_stop
        .ok_or_else(|| Failure::Usage("--t-stop is required when a time grid is given".into()))?;
    Ok(Some(Grid::new(args.t_start.unwrap_or(0.0), stop, args.t_points.unwrap_or(400))?))
}

fn single_atom_count(args: &Args, default: usize) -> Result<usize, Failure> {
    match args.atoms[..] {
        [] => Ok(default),
        [n] => Ok(n),
        _ => Err(Failure::Usage("this command takes a single --atoms value".into())),
    }
}

fn engine(args: &Args) -> Engine {
    match args.engine {
        EngineArg::Brute => Engine::Brute,
        EngineArg::Analytic => Engine::Analytic,
    }
}

fn run(args: &Args) -> Result<(), Failure> {
    if !(args.gamma > 0.0) || !args.gamma.is_finite() {
        return Err(Failure::Usage(format!("--gamma must be positive, got {}", args.gamma)));
    }
    let Format::Csv = args.format;
    let times = args.measure_times.as_deref();
    let (text, failed) = match args.command {
        Command::SmallSample => {
            let atoms = if args.atoms.is_empty() { vec![10, 20, 30] } else { args.atoms.clone() };
            (small_sample_table(&atoms, args.gamma, grid(args)?)?.to_csv(), None)
        }
        Command::Cascade => {
            let n = single_atom_count(args, 5)?;
            (cascade_table(n, args.gamma, times, grid(args)?, engine(args))?.to_csv(), None)
        }
        Command::TraceDistance => {
            let n = single_atom_count(args, 5)?;
            (trace_distance_table(n, args.gamma, times, grid(args)?, engine(args))?.to_csv(), None)
        }
        Command::Crosscheck => crosscheck(args)?,
    };
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|source| Failure::Io {
            path: path.clone(),
            source,
        })?,
        None => print!("{text}"),
    }
    match failed {
        Some(names) => Err(Failure::Crosscheck(names)),
        None => Ok(()),
    }
}

/// JSON report plus the names of failing properties, if any.
fn crosscheck(args: &Args) -> Result<(String, Option<String>), Failure> {
    let mut config = CrosscheckConfig {
        seed: args.seed,
        max_brute_atoms: single_atom_count(args, CrosscheckConfig::default().max_brute_atoms)?,
        ..CrosscheckConfig::default()
    };
    if let Some(scale) = args.corrupt_feed {
        config.feed_scale = scale;
    }
    let reports = run_crosscheck(&config)?;
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    let properties: Vec<_> = reports
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "instances": r.instances,
                "max_abs_deviation": r.max_abs_deviation,
                "max_rel_deviation": r.max_rel_deviation,
                "tolerance": r.tolerance,
                "tolerance_kind": if r.relative { "relative" } else { "absolute" },
                "passed": r.passed,
            })
        })
        .collect();
    let report = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "seed": config.seed,
        "max_brute_atoms": config.max_brute_atoms,
        "passed": failed.is_empty(),
        "properties": properties,
    });
    let mut text = serde_json::to_string_pretty(&report).unwrap_or_default();
    text.push('\n');
    Ok((text, (!failed.is_empty()).then(|| failed.join(", "))))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
