use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hybridvrp::vrptw::{Mode, ObjectiveConfig, RoutePenalty};

mod commands;
mod data;

/// A failed command: message plus process exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(m: impl Into<String>) -> Self {
        Failure { code: 1, message: m.into() }
    }

    pub fn data(m: impl Into<String>) -> Self {
        Failure { code: 2, message: m.into() }
    }

    pub fn invalid(m: impl Into<String>) -> Self {
        Failure { code: 3, message: m.into() }
    }
}

#[derive(Parser)]
#[command(name = "hybridvrp", version, about = "VRPTW hybrid algorithms as composable terms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run terms on a dataset and report per-instance results.
    Solve(SolveArgs),
    /// Learn a term with the evolutionary loop.
    Learn(LearnArgs),
    /// Print the estimated insertion count of terms.
    Estimate(EstimateArgs),
    /// Check a solution file against its instance.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Travel,
    Trucks,
}

#[derive(Clone, Copy, ValueEnum)]
enum PenaltyArg {
    PerRoute,
    Flat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args)]
pub struct Common {
    /// Instance files, or directories of `*.txt` instances.
    #[arg(long, num_args = 1.., required = true)]
    pub data: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "travel")]
    mode: ModeArg,
    /// `ID COUNT` lines giving target route counts (trucks mode).
    #[arg(long)]
    pub eopt_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0: one per core).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Multiplier on travel and service time.
    #[arg(long, default_value_t = 10.0)]
    scale: f64,
    #[arg(long, value_enum, default_value = "per-route")]
    penalty: PenaltyArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

impl Common {
    pub fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Travel => Mode::Travel,
            ModeArg::Trucks => Mode::Trucks,
        }
    }

    pub fn objective(&self) -> ObjectiveConfig {
        let base = match self.mode() {
            Mode::Travel => ObjectiveConfig::travel(),
            Mode::Trucks => ObjectiveConfig::trucks(),
        };
        base.with_scale(self.scale).with_penalty(match self.penalty {
            PenaltyArg::PerRoute => RoutePenalty::PerRoute,
            PenaltyArg::Flat => RoutePenalty::Flat,
        })
    }
}

#[derive(Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: Common,
    /// Term text; repeat for several terms.
    #[arg(long)]
    pub term: Vec<String>,
    /// File with one term per line (`#` comments allowed).
    #[arg(long)]
    pub term_file: Option<PathBuf>,
    /// Runs per instance.
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    /// Directory receiving one JSON solution per cell.
    #[arg(long)]
    pub solutions: Option<PathBuf>,
}

#[derive(Args)]
pub struct LearnArgs {
    #[command(flatten)]
    pub common: Common,
    /// Named configuration: al2, am2, ag2, ai2, ap0, ap1, ap2.
    #[arg(long, default_value = "al2")]
    pub preset: String,
    /// Pool size M.
    #[arg(long)]
    pub pool: Option<usize>,
    /// Excellent terms K, used for both mutation and crossover.
    #[arg(long)]
    pub excellent: Option<usize>,
    #[arg(long)]
    pub mutate_k: Option<usize>,
    #[arg(long)]
    pub cross_k: Option<usize>,
    /// Iterations N.
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long, default_value_t = 50_000)]
    pub complexity_goal: u64,
    /// Independent learning runs L.
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    /// Runs per instance when re-ranking excellent terms.
    #[arg(long, default_value_t = 10)]
    pub runs_per_eval: usize,
    #[arg(long)]
    pub diet_bound: Option<usize>,
    /// Per-iteration history as CSV.
    #[arg(long)]
    pub history: Option<PathBuf>,
    /// Term library; each run's best term is appended.
    #[arg(long)]
    pub library: Option<PathBuf>,
}

#[derive(Args)]
pub struct EstimateArgs {
    pub terms: Vec<String>,
    #[arg(long)]
    pub term: Vec<String>,
}

#[derive(Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub solution: PathBuf,
    #[arg(long)]
    pub instance: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let jobs = match &cli.command {
        Command::Solve(a) => a.common.jobs,
        Command::Learn(a) => a.common.jobs,
        _ => 1,
    };
    if jobs > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    let result = match cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Learn(a) => commands::learn(a),
        Command::Estimate(a) => commands::estimate(a),
        Command::Validate(a) => commands::validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
