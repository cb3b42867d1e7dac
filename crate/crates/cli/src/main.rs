mod commands;
mod failure;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use failure::{Failure, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "mvm", version, about = "Equipower mode-vector constellations: generate, shape, label, evaluate, simulate")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Hypercube,
    Sic,
    Orthogonal,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PotentialKind {
    Thomson,
    UnionBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalKind {
    Ser,
    Ber,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Auto,
    Asymp0,
    Asymp1,
    Simple,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated constellation.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        /// Number of symbols (orthogonal, random; optional subset for hypercube).
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Projected gradient descent under a pair potential.
    Shape {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "thomson")]
        potential: PotentialKind,
        /// Symbol SNR per SDOF in dB (union-bound potential only).
        #[arg(long = "snr-db")]
        snr_db: Option<f64>,
        #[arg(long, default_value_t = 20_000)]
        iters: usize,
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        #[arg(long = "grad-tol", default_value_t = 1e-6)]
        grad_tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Descent trace CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Anneal bit labels.
    Map {
        #[arg(long = "in")]
        input: PathBuf,
        /// Bit SNR per SDOF in dB.
        #[arg(long = "snr-db", default_value_t = 10.0)]
        snr_db: f64,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Union-bound curve over an SNR grid.
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
        /// `start:step:stop` in dB, or a single value.
        #[arg(long = "snr-db")]
        snr_db: String,
        #[arg(long, value_enum, default_value = "ser")]
        kind: EvalKind,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte-Carlo error rates over an SNR grid.
    Simulate {
        #[arg(long = "in")]
        input: PathBuf,
        /// `start:step:stop` in dB (bit SNR with labels, symbol SNR without).
        #[arg(long = "snr-db")]
        snr_db: String,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Curve CSV; rows are appended when the file exists.
        #[arg(long)]
        out: PathBuf,
        /// Per-point results as JSON (defaults to `<out>.json`).
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long = "early-stop")]
        early_stop: bool,
        #[arg(long = "random-phase")]
        random_phase: bool,
    },
    /// Packing diagnostics.
    Inspect {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "bin-width", default_value_t = 0.01)]
        bin_width: f64,
    },
}

/// Worker count from `MVM_THREADS`, if set.
fn requested_threads() -> Result<Option<usize>, Failure> {
    match std::env::var("MVM_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Failure::usage(format!("MVM_THREADS must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(None),
    }
}

pub fn threads() -> usize {
    #[cfg(feature = "parallel")]
    return rayon::current_num_threads();
    #[cfg(not(feature = "parallel"))]
    1
}

fn init_threads() -> Result<(), Failure> {
    let requested = requested_threads()?;
    #[cfg(feature = "parallel")]
    if let Some(n) = requested {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = requested;
    Ok(())
}

fn run(cli: Cli, argv: Vec<String>) -> Result<(), Failure> {
    init_threads()?;
    let mut manifest = manifest::RunManifest::start(argv);
    match cli.command {
        Command::Gen { kind, n, m, seed, out } => commands::gen(kind, n, m, seed, &out, &mut manifest),
        Command::Shape {
            input,
            potential,
            snr_db,
            iters,
            step,
            grad_tol,
            seed,
            out,
            trace,
        } => commands::shape(
            &commands::ShapeArgs {
                input,
                potential,
                snr_db,
                iters,
                step,
                grad_tol,
                seed,
                out,
                trace,
            },
            &mut manifest,
        ),
        Command::Map {
            input,
            snr_db,
            restarts,
            seed,
            out,
        } => commands::map(&input, snr_db, restarts, seed, &out, &mut manifest),
        Command::Eval {
            input,
            snr_db,
            kind,
            method,
            out,
        } => commands::eval(&input, &snr_db, kind, method, &out, &mut manifest),
        Command::Simulate {
            input,
            snr_db,
            trials,
            seed,
            out,
            json,
            early_stop,
            random_phase,
        } => commands::simulate(
            &commands::SimulateArgs {
                input,
                snr_db,
                trials,
                seed,
                out,
                json,
                early_stop,
                random_phase,
            },
            &mut manifest,
        ),
        Command::Inspect { input, bin_width } => commands::inspect(&input, bin_width),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
