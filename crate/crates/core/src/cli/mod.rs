//! Command-line front end: argument definitions, config loading, output
//! files and exit codes. The `qdistill` binary only forwards to [`main_with_args`].

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{cmd_distill, cmd_eval, cmd_gen_iqft, cmd_qpe, cmd_shor};
pub use config::{parse_target, DistillFile, DistillSettings};
pub use output::{config_hash, read_circuit, write_circuit};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qdistill", version, about = "Quantum-circuit distillation experiments")]
pub struct Cli {
    /// Seed for every random choice; overrides a config file's seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for a short circuit reproducing a target's output distributions.
    Distill(DistillArgs),
    /// Score a circuit file against a reference transform.
    Eval(EvalArgs),
    /// Write an inverse-QFT circuit and report its gate counts.
    GenIqft(GenIqftArgs),
    /// Phase-estimation output distribution.
    Qpe(QpeArgs),
    /// Order finding for 37 mod 57 and the recovered factors.
    Shor(ShorArgs),
}

#[derive(Debug, Args)]
pub struct DistillArgs {
    /// Config file (`key = value` lines).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalModeArg {
    Exact,
    Sampled,
}

/// Gate and readout error rates.
#[derive(Debug, Clone, Copy, Args)]
pub struct NoiseArgs {
    /// Pauli error probability after each one-qubit gate.
    #[arg(long, default_value_t = 0.0)]
    pub p1: f64,
    /// Pauli error probability per qubit after each two-qubit gate.
    #[arg(long, default_value_t = 0.0)]
    pub p2: f64,
    /// Readout bit-flip probability.
    #[arg(long, default_value_t = 0.0)]
    pub readout: f64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    /// Reference transform, `iqft-<n>`.
    #[arg(long)]
    pub reference: String,
    #[arg(long, value_enum, default_value_t = EvalModeArg::Exact)]
    pub mode: EvalModeArg,
    #[arg(long, default_value_t = 8192)]
    pub shots: usize,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Number of random input states.
    #[arg(long, default_value_t = 20)]
    pub inputs: usize,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Conventional,
    Generalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    CnotNetwork,
    SwapLadder,
}

#[derive(Debug, Args)]
pub struct GenIqftArgs {
    #[arg(long, value_parser = parse_qubits)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Variant::Conventional)]
    pub variant: Variant,
    /// Construction used by the generalized variant.
    #[arg(long, value_enum, default_value_t = LayoutArg::CnotNetwork)]
    pub layout: LayoutArg,
    /// Circuit JSON destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write gate counts for n = 2..=scaling-max as CSV.
    #[arg(long)]
    pub scaling: Option<PathBuf>,
    #[arg(long, default_value_t = 9)]
    pub scaling_max: usize,
}

#[derive(Debug, Args)]
pub struct QpeArgs {
    #[arg(long, value_parser = parse_qubits)]
    pub n: usize,
    /// Eigenphase in [0, 1), as a decimal or a fraction such as `5/16`.
    #[arg(long)]
    pub theta: String,
    #[arg(long, value_enum, default_value_t = Variant::Conventional)]
    pub variant: Variant,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShorVariant {
    Conventional,
    Generalized,
    /// A 4-qubit inverse-QFT replacement read from `--circuit`.
    CircuitFile,
}

#[derive(Debug, Args)]
pub struct ShorArgs {
    #[arg(long, value_enum, default_value_t = ShorVariant::Conventional)]
    pub variant: ShorVariant,
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Sample this many shots instead of reporting the exact distribution.
    /// Defaults to 8192 when any noise rate is nonzero.
    #[arg(long)]
    pub shots: Option<usize>,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs a parsed command line.
fn parse_qubits(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if (1..=10).contains(&n) => Ok(n),
        _ => Err(format!("{s} is not a qubit count in 1..=10")),
    }
}

pub fn run(cli: Cli) -> crate::Result<()> {
    match cli.command {
        Command::Distill(a) => cmd_distill(&a, cli.seed),
        Command::Eval(a) => cmd_eval(&a, cli.seed),
        Command::GenIqft(a) => cmd_gen_iqft(&a, cli.seed),
        Command::Qpe(a) => cmd_qpe(&a, cli.seed),
        Command::Shor(a) => cmd_shor(&a, cli.seed),
    }
}

/// Exit code for a failed command: configuration problems are usage errors.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidConfig(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
