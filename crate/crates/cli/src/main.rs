//! `relmotion`: error sweeps and single-scenario propagation against the
//! Keplerian truth, written as CSV.
//!
//! Exit codes: 0 on success, 2 for configuration errors, 3 for numerical
//! failures, 1 for anything else (for instance an unwritable output file).

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use relmotion::sweep::{
    build_scenario, emit_csv, emit_series_csv, log_grid, parse_model_list, propagate_series,
    sweep_delta_a, sweep_eccentricity, sweep_separation, ModelId, ScenarioConfig,
};
use relmotion::Error;

#[derive(Parser, Debug)]
#[command(
    name = "relmotion",
    version,
    about = "Relative-motion model accuracy against a Keplerian truth"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Propagate one scenario and write model and truth positions over time.
    Propagate(Common),
    /// Maximum error against chief eccentricity.
    SweepEcc(Sweep),
    /// Maximum error against along-track separation a*dlambda (km).
    SweepSep(Sweep),
    /// Maximum error against altitude offset a*da (km).
    SweepDa(Sweep),
}

#[derive(Args, Debug)]
struct Common {
    /// JSON scenario file; angles in degrees. Missing keys take defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated models, e.g. ya_curv,second_order_curv.
    #[arg(long)]
    models: Option<String>,
    /// Scenario length in chief orbits [default: 10, or the config value].
    #[arg(long)]
    orbits: Option<u32>,
    /// Samples per orbit [default: 1000, or the config value].
    #[arg(long)]
    samples: Option<u32>,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Sweep {
    #[command(flatten)]
    common: Common,
    /// Comma-separated sweep values; a logarithmic default grid otherwise.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    /// Number of points in the default grid.
    #[arg(long, default_value_t = 30)]
    points: usize,
}

enum Failure {
    Config(String),
    Numerical(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::EmptyRecords => Failure::Config(e.to_string()),
            Error::Io(_) | Error::Csv(_) => Failure::Other(e.to_string()),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

fn load_config(c: &Common) -> Result<ScenarioConfig, Failure> {
    let mut cfg = match &c.config {
        Some(path) => ScenarioConfig::from_path(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(m) = &c.models {
        cfg.models = parse_model_list(m)?;
    }
    if let Some(n) = c.orbits {
        cfg.n_orbits = n;
    }
    if let Some(s) = c.samples {
        cfg.samples_per_orbit = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn with_output(
    out: Option<&Path>,
    write: impl FnOnce(&mut dyn Write) -> relmotion::Result<()>,
) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush().map_err(|e| Failure::Other(e.to_string()))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            Ok(())
        }
    }
}

type SweepFn = fn(
    &ScenarioConfig,
    &[f64],
    &[ModelId],
) -> relmotion::Result<Vec<relmotion::sweep::ErrorRecord>>;

fn run_sweep(s: &Sweep, run: SweepFn, default_range: (f64, f64)) -> Result<(), Failure> {
    let cfg = load_config(&s.common)?;
    let values = match &s.values {
        Some(v) if v.is_empty() => return Err(Failure::Config("--values is empty".into())),
        Some(v) => v.clone(),
        None => log_grid(default_range.0, default_range.1, s.points),
    };
    let records = run(&cfg, &values, &cfg.models)?;
    with_output(s.common.out.as_deref(), |w| emit_csv(&records, w))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Propagate(c) => {
            let cfg = load_config(&c)?;
            let scenario = build_scenario(&cfg)?;
            let rows = propagate_series(&scenario, &cfg.models)?;
            with_output(c.out.as_deref(), |w| {
                emit_series_csv(&cfg.scenario_id, &rows, w)
            })
        }
        Command::SweepEcc(s) => run_sweep(&s, sweep_eccentricity, (1e-4, 0.9)),
        Command::SweepSep(s) => run_sweep(&s, sweep_separation, (0.1, 1e4)),
        Command::SweepDa(s) => run_sweep(&s, sweep_delta_a, (0.01, 10.0)),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
