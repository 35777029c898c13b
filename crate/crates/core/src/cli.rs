//! Command-line surface. Every command prints exactly one JSON document on stdout.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::experiments::{self, report, SamplingReport};
use crate::gate_io::{self, load_gate, GateJson};
use crate::pso::PsoConfig;
use crate::separation::{approx_separate, is_epsilon_separable, ProductAnsatz, SeparationResult};
use crate::spectral::gate_fidelity_min;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

/// Environment variable capping worker threads (0 or unset: rayon default).
pub const THREADS_ENV: &str = "GATESPLIT_THREADS";

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "gatesplit", version, about = "Minimum gate fidelity and approximate tensor-product separation of unitaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Minimum gate fidelity between two gates (fixture names or gate JSON files).
    Fidelity {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Search for local gates whose tensor product best approximates a target.
    Separate {
        #[arg(long)]
        target: String,
        /// Local dimensions, e.g. 2,2
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce one of the reference experiments.
    Experiment {
        #[arg(value_enum)]
        which: ExperimentKind,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random states drawn by `figure2`.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the exact minimum fidelity with the chord formula on random pairs.
    Theorem {
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Validate a gate and re-emit it in canonical JSON (unitarized if slightly off).
    Convert {
        #[arg(long)]
        gate: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExperimentKind {
    Cnot,
    Figure2,
}

impl ExperimentKind {
    fn name(self) -> &'static str {
        match self {
            ExperimentKind::Cnot => "cnot",
            ExperimentKind::Figure2 => "figure2",
        }
    }
}

/// Why parsing failed: a usage error, or a request for help/version text.
#[derive(Debug)]
pub struct ParseFailure(clap::Error);

impl ParseFailure {
    pub fn exit_code(&self) -> i32 {
        if self.0.use_stderr() {
            EXIT_USAGE
        } else {
            EXIT_OK
        }
    }

    pub fn print(&self) {
        let _ = self.0.print();
    }
}

impl std::fmt::Display for ParseFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Parses arguments, excluding the program name.
pub fn parse_args<I, S>(argv: I) -> Result<Command, ParseFailure>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args = std::iter::once("gatesplit".to_string()).chain(argv.into_iter().map(Into::into));
    Cli::try_parse_from(args).map(|c| c.command).map_err(ParseFailure)
}

impl Command {
    /// An argument vector that parses back to `self`.
    pub fn to_args(&self) -> Vec<String> {
        let mut v: Vec<String> = Vec::new();
        match self {
            Command::Fidelity { a, b } => {
                v.extend(["fidelity".into(), "--a".into(), a.clone(), "--b".into(), b.clone()]);
            }
            Command::Separate {
                target,
                dims,
                epsilon,
                seed,
                out,
            } => {
                v.push("separate".into());
                v.extend(["--target".into(), target.clone()]);
                let dims = dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
                v.extend(["--dims".into(), dims]);
                if let Some(e) = epsilon {
                    v.extend(["--epsilon".into(), e.to_string()]);
                }
                v.extend(["--seed".into(), seed.to_string()]);
                if let Some(o) = out {
                    v.extend(["--out".into(), o.display().to_string()]);
                }
            }
            Command::Experiment { which, seed, samples, out } => {
                v.extend(["experiment".into(), which.name().into()]);
                v.extend(["--seed".into(), seed.to_string(), "--samples".into(), samples.to_string()]);
                if let Some(o) = out {
                    v.extend(["--out".into(), o.display().to_string()]);
                }
            }
            Command::Theorem { trials, dim, seed } => {
                v.push("theorem".into());
                v.extend(["--trials".into(), trials.to_string(), "--dim".into(), dim.to_string()]);
                v.extend(["--seed".into(), seed.to_string()]);
            }
            Command::Convert { gate, out } => {
                v.extend(["convert".into(), "--gate".into(), gate.clone()]);
                if let Some(o) = out {
                    v.extend(["--out".into(), o.display().to_string()]);
                }
            }
        }
        v
    }
}

/// Failure of a parsed command, mapped onto the process exit code.
#[derive(Debug)]
pub struct RunFailure {
    pub exit_code: i32,
    pub error: Error,
}

impl RunFailure {
    /// Diagnostic JSON for stderr.
    pub fn diagnostic(&self) -> String {
        let kind = match self.exit_code {
            EXIT_USAGE => "usage",
            EXIT_NUMERICAL => "numerical",
            _ => "data",
        };
        serde_json::json!({ "error": kind, "message": self.error.to_string() }).to_string()
    }
}

impl From<Error> for RunFailure {
    fn from(error: Error) -> Self {
        let exit_code = match &error {
            e if e.is_numerical() => EXIT_NUMERICAL,
            Error::InvalidConfig(_) | Error::OutOfRange { .. } => EXIT_USAGE,
            _ => EXIT_DATA,
        };
        RunFailure { exit_code, error }
    }
}

#[derive(Serialize)]
struct SeparateOutput<'a> {
    #[serde(flatten)]
    result: &'a SeparationResult,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon_separable: Option<bool>,
}

#[derive(Serialize)]
struct Figure2Output<'a> {
    #[serde(flatten)]
    report: &'a SamplingReport,
    local_corrections: &'a [f64],
}

fn note(msg: &str) {
    eprintln!("gatesplit: {msg}");
}

fn load(spec: &str) -> Result<crate::linalg::UnitaryGate, Error> {
    let loaded = load_gate(spec)?;
    if let Some(d) = loaded.projection_distance {
        note(&format!("{spec}: projected onto the nearest unitary (Frobenius correction {d:.3e})"));
    }
    Ok(loaded.gate)
}

/// Executes a command and returns the JSON document for stdout.
pub fn run(cmd: &Command) -> Result<String, RunFailure> {
    let json = match cmd {
        Command::Fidelity { a, b } => {
            let report = gate_fidelity_min(&load(a)?, &load(b)?)?;
            serde_json::to_string_pretty(&report).map_err(Error::from)?
        }
        Command::Separate {
            target,
            dims,
            epsilon,
            seed,
            out,
        } => {
            if let Some(e) = epsilon {
                if !(*e > 0.0 && *e < 1.0) {
                    return Err(Error::OutOfRange {
                        name: "epsilon",
                        value: *e,
                        range: "(0, 1)",
                    }
                    .into());
                }
            }
            let gate = load(target)?.with_partition(dims.clone())?;
            let ansatz = ProductAnsatz::new(dims)?;
            let result = approx_separate(&gate, target, &ansatz, &PsoConfig::default().with_seed(*seed))?;
            if let Some(dir) = out {
                std::fs::create_dir_all(dir).map_err(Error::from)?;
                report::write_convergence_csv(&dir.join("convergence.csv"), result.pso.best_history())?;
            }
            let output = SeparateOutput {
                result: &result,
                epsilon: *epsilon,
                epsilon_separable: epsilon.map(|e| is_epsilon_separable(&result, e)),
            };
            let text = serde_json::to_string_pretty(&output).map_err(Error::from)?;
            if let Some(dir) = out {
                std::fs::write(dir.join("separation.json"), &text).map_err(Error::from)?;
            }
            text
        }
        Command::Experiment { which, seed, samples, out } => match which {
            ExperimentKind::Cnot => {
                let result = experiments::run_cnot_experiment(&PsoConfig::default().with_seed(*seed), out.as_deref())?;
                serde_json::to_string_pretty(&result).map_err(Error::from)?
            }
            ExperimentKind::Figure2 => {
                let published = experiments::published_locals()?;
                let report = experiments::run_figure2_experiment(*samples, *seed, out.as_deref())?;
                serde_json::to_string_pretty(&Figure2Output {
                    report: &report,
                    local_corrections: &published.corrections,
                })
                .map_err(Error::from)?
            }
        },
        Command::Theorem { trials, dim, seed } => {
            let report = experiments::run_theorem_validation(*trials, *dim, *seed)?;
            serde_json::to_string_pretty(&report).map_err(Error::from)?
        }
        Command::Convert { gate, out } => {
            let g = load(gate)?;
            let text = serde_json::to_string_pretty(&GateJson::from_gate(&g)).map_err(Error::from)?;
            if let Some(path) = out {
                std::fs::write(path, gate_io::gate_to_json(&g)).map_err(Error::from)?;
            }
            text
        }
    };
    Ok(json)
}

/// Reads [`THREADS_ENV`]. `Ok(None)` means "use the default".
pub fn threads_from_env() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) if s.trim().is_empty() => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(0) => Ok(None),
            Ok(n) => Ok(Some(n)),
            Err(_) => Err(format!("{THREADS_ENV} must be a non-negative integer, got {s:?}")),
        },
    }
}
