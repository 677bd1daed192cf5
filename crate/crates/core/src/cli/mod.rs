//! Command-line front end.
//!
//! Every command reads its inputs from files or flags, calls the library and
//! writes one artifact to `--out` (or stdout). Exit status is 0 on success,
//! 1 when the library reports a domain error (singular Hankel window,
//! unobservable system, …) and 2 for usage, parse and I/O errors.

pub mod format;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::dynsys::{is_observable, sample_continuous, simulate_discrete, SystemKind};
use crate::error::Error;
use crate::experiments::{mc_estimate, Property, SamplingBox, TrialConfig};
use crate::ident::{identify_with, predict, recover_continuous_spectrum, IdentOptions, SolveMode};
use crate::numkit::DEFAULT_RANK_TOL;

use format::{
    format_series, read_report, read_series, to_canonical_json, ModelFile, ObservabilityReport,
    SpectrumReport, SystemFile, FORMAT_VERSION,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("series contains no samples")]
    EmptySeries,

    #[error("invalid file contents: {0}")]
    Format(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{0}")]
    Domain(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Parse { .. } => "ParseError",
            CliError::EmptySeries => "EmptySeries",
            CliError::Format(_) => "FormatError",
            CliError::Io { .. } => "IoError",
            CliError::Domain(e) => e.name(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hankel-ident",
    version,
    about = "Identify linear output recurrences from scalar time series"
)]
pub struct Cli {
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Tolerance: rank threshold for `observability`, success threshold for `montecarlo`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate or sample a system into a series file.
    Simulate {
        #[arg(long)]
        system: PathBuf,
        /// Initial state, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long)]
        len: usize,
        /// Sampling step, overriding the one in a continuous system file.
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Identify the order-n recurrence of a series.
    Identify {
        #[arg(long)]
        series: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
        /// Also solve for a constant offset.
        #[arg(long)]
        affine: bool,
        /// Least squares over every available window.
        #[arg(long)]
        overdetermined: bool,
    },
    /// Extend a seed window with a model's predictions.
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// Latest `order` observations, oldest first, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        seed_window: String,
        #[arg(long)]
        steps: usize,
    },
    /// Rank of the observability matrix of a system.
    Observability {
        #[arg(long)]
        system: PathBuf,
    },
    /// Continuous-time eigenvalues recovered from a sampled model.
    Spectrum {
        #[arg(long)]
        model: PathBuf,
    },
    /// Monte Carlo estimate of a genericity property.
    Montecarlo {
        #[arg(long)]
        property: Property,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        /// Sampling box `lo,hi`.
        #[arg(long = "box", allow_hyphen_values = true, default_value = "-1,1")]
        sampling_box: String,
        #[arg(long, default_value_t = 1e10)]
        cond_cap: f64,
    },
}

fn parse_csv(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("--{flag}: invalid number '{}'", t.trim())))
        })
        .collect()
}

/// Executes one parsed command and returns the artifact text.
pub fn run_command(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Simulate {
            system,
            x0,
            len,
            lambda,
        } => {
            let file: SystemFile = read_report(system)?;
            let x0 = parse_csv("x0", x0)?;
            if x0.len() != file.system.dim() {
                return Err(CliError::Usage(format!(
                    "--x0 has {} entries, system dimension is {}",
                    x0.len(),
                    file.system.dim()
                )));
            }
            if *len == 0 {
                return Err(CliError::Usage("--len must be positive".into()));
            }
            let series = match (file.system.kind(), lambda) {
                (SystemKind::Discrete, None) => simulate_discrete(&file.system, &x0, *len)?,
                (SystemKind::Discrete, Some(_)) => {
                    return Err(CliError::Usage(
                        "--lambda only applies to continuous systems".into(),
                    ))
                }
                (SystemKind::Continuous, None) => sample_continuous(&file.system, &x0, *len)?,
                (SystemKind::Continuous, Some(step)) => {
                    sample_continuous(&file.system.with_step(*step)?, &x0, *len)?
                }
            };
            Ok(format_series(&series))
        }
        Command::Identify {
            series,
            n,
            k,
            affine,
            overdetermined,
        } => {
            if *n == 0 {
                return Err(CliError::Usage("--n must be positive".into()));
            }
            let series = read_series(series)?;
            let opts = IdentOptions {
                mode: if *overdetermined {
                    SolveMode::Overdetermined
                } else {
                    SolveMode::Exact
                },
                affine: *affine,
                ..IdentOptions::default()
            };
            let report = identify_with(&series, *n, *k, &opts)?;
            to_canonical_json(&ModelFile::from_report(&report))
        }
        Command::Predict {
            model,
            seed_window,
            steps,
        } => {
            let file: ModelFile = read_report(model)?;
            let model = file.to_model()?;
            let seed = parse_csv("seed-window", seed_window)?;
            if seed.len() != model.order() {
                return Err(CliError::Usage(format!(
                    "--seed-window has {} values, model order is {}",
                    seed.len(),
                    model.order()
                )));
            }
            if *steps == 0 {
                return Err(CliError::Usage("--steps must be positive".into()));
            }
            let predicted = predict(&model, &seed, *steps)?;
            let mut values = seed;
            values.extend_from_slice(predicted.values());
            let extended = crate::dynsys::TimeSeries::new(values)?.with_step(model.step())?;
            Ok(format_series(&extended))
        }
        Command::Observability { system } => {
            let file: SystemFile = read_report(system)?;
            let tol = cli.tol.unwrap_or(DEFAULT_RANK_TOL);
            if tol.is_nan() || tol <= 0.0 {
                return Err(CliError::Usage("--tol must be positive".into()));
            }
            let (observable, rank) = is_observable(file.system.a(), file.system.c(), tol)?;
            to_canonical_json(&ObservabilityReport {
                format_version: FORMAT_VERSION,
                n: file.system.dim(),
                rank,
                observable,
                tol,
            })
        }
        Command::Spectrum { model } => {
            let file: ModelFile = read_report(model)?;
            let model = file.to_model()?;
            let spectrum = recover_continuous_spectrum(&model)?;
            to_canonical_json(&SpectrumReport {
                format_version: FORMAT_VERSION,
                step: model.step().expect("checked by recovery"),
                eigenvalues: spectrum.eigenvalues.iter().map(|z| [z.re, z.im]).collect(),
                aliasing_risk: spectrum.aliasing_risk,
            })
        }
        Command::Montecarlo {
            property,
            n,
            trials,
            sampling_box,
            cond_cap,
        } => {
            let bounds = parse_csv("box", sampling_box)?;
            let [lo, hi] = bounds[..] else {
                return Err(CliError::Usage("--box expects 'lo,hi'".into()));
            };
            let config = TrialConfig {
                n: *n,
                trials: *trials,
                seed: cli.seed.unwrap_or(0),
                sampling_box: SamplingBox::new(lo, hi)
                    .map_err(|e| CliError::Usage(e.to_string()))?,
                success_tol: cli.tol.unwrap_or(1e-6),
                cond_cap: *cond_cap,
            };
            config
                .validate()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            to_canonical_json(&mc_estimate(*property, &config)?)
        }
    }
}

/// Parses `args`, runs the command, writes its artifact and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = run_command(&cli).and_then(|text| match &cli.out {
        Some(path) => format::write_text(path, &text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io {
                path: "<stdout>".into(),
                message: e.to_string(),
            }),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            e.exit_code()
        }
    }
}
