mod commands;
mod config;
mod output;

use std::fmt;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use crate::commands::{AdiabaticArgs, FuzzArgs, ManyBodyArgs, ObcArgs, SweepArgs, TranslateArgs};
use crate::config::{CommonArgs, Format, ModelKind, RunConfig};

/// Gauge-invariant geometric phases of one-dimensional Bloch bands.
#[derive(Debug, Parser)]
#[command(name = "pzphase", version, allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pancharatnam-Zak and Zak phases of one band
    Phase,
    /// Same as `phase --model continuum`
    Continuum,
    /// Phases along a one-parameter grid
    Sweep(SweepArgs),
    /// Random gauge transformations applied to one chain
    GaugeFuzz(FuzzArgs),
    /// Phases before and after moving the cell origin
    TranslateTest(TranslateArgs),
    /// Filled-band phase against the Slater determinant oracle
    Manybody(ManyBodyArgs),
    /// Geometric phase from direct time evolution
    Adiabatic(AdiabaticArgs),
    /// Open-chain spectrum and zero modes (SSH)
    Obc(ObcArgs),
}

/// Exit codes: 1 invariance violation, 2 gap closure, 3 bad input,
/// 4 any other numerical failure.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            kind: "InvalidInput",
            message: message.into(),
        }
    }

    pub fn violation(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            kind: "InvarianceViolation",
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl From<pzphase::Error> for CliError {
    fn from(e: pzphase::Error) -> Self {
        use pzphase::Error::*;
        let (code, kind) = match &e {
            GapClosure { .. } => (2, "GapClosure"),
            InvalidInput(_) => (3, "InvalidInput"),
            DimensionMismatch { .. } => (3, "DimensionMismatch"),
            NotHermitian(_) => (4, "NotHermitian"),
            NonUnitary(_) => (4, "NonUnitary"),
            DegenerateSpectrum(_) => (4, "DegenerateSpectrum"),
            NoConvergence { .. } => (4, "NoConvergence"),
            UndersampledRing { .. } => (4, "UndersampledRing"),
            OverlapTooSmall { .. } => (4, "OverlapTooSmall"),
            ZeroOverlap(_) => (4, "ZeroOverlap"),
            OrthogonalStates(_) => (4, "OrthogonalStates"),
            SingularOverlapMatrix(_) => (4, "SingularOverlapMatrix"),
            NormDrift(_) => (4, "NormDrift"),
            StepTooLarge(_) => (4, "StepTooLarge"),
        };
        Self {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Phase | Command::Continuum => commands::phase(cfg),
        Command::Sweep(args) => commands::sweep(cfg, args),
        Command::GaugeFuzz(args) => commands::gauge_fuzz(cfg, args),
        Command::TranslateTest(args) => commands::translate_test(cfg, args),
        Command::Manybody(args) => commands::manybody(cfg, args),
        Command::Adiabatic(args) => commands::adiabatic(cfg, args),
        Command::Obc(args) => commands::obc(cfg, args),
    })
}

/// Best effort at the requested format when the command line itself failed.
fn wants_json() -> bool {
    let args: Vec<String> = std::env::args().collect();
    args.windows(2).any(|w| w[0] == "--format" && w[1] == "json") || args.iter().any(|a| a == "--format=json")
}

fn report(err: &CliError, json_mode: bool) -> ExitCode {
    // Violations have already written their data, which carries the verdict.
    if json_mode && err.code != 1 {
        let obj = json!({ "error": err.kind, "message": err.message, "exit_code": err.code });
        println!("{}", serde_json::to_string_pretty(&obj).expect("json serialization"));
    }
    eprintln!("pzphase: {err}");
    ExitCode::from(err.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            if wants_json() {
                return report(&CliError::usage(e.to_string().trim().to_string()), true);
            }
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    let mut cfg = match RunConfig::resolve(&cli.common) {
        Ok(cfg) => cfg,
        Err(err) => return report(&err, wants_json()),
    };
    if matches!(cli.command, Command::Continuum) {
        cfg.model = ModelKind::Continuum;
    }
    let json_mode = cfg.format == Format::Json;
    match run(&cli, &cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => report(&err, json_mode),
    }
}
