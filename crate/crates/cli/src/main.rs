//! `qhb`: transforms, norms, solves, verification and benchmarks from the command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numeric failure, 3 verification failure.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "qhb", version, about = "Spectral Barron spaces of operators on finite phase spaces")]
struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for the parallel transform kernels.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quantum Fourier transform of an operator file.
    Qft(QftArgs),
    /// Inverse transform of a phase-function file.
    Iqft(IoArgs),
    /// Barron, Sobolev, Schatten or operator norm of an operator file.
    Norm(NormArgs),
    /// Solve (I - Δ + V) S = T.
    Solve(SolveArgs),
    /// Run the property suite; exits 3 if any property fails.
    Verify(VerifyArgs),
    /// Time the naive and fast transforms; CSV on stdout.
    Bench(BenchArgs),
    /// Write a seeded random operator file.
    Random(RandomArgs),
}

#[derive(Debug, Args)]
struct IoArgs {
    #[arg(long)]
    input: PathBuf,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct QftArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Diagonal FFT algorithm (default).
    #[arg(long, conflicts_with = "naive")]
    fast: bool,
    /// Trace against explicit adjoints, O(N^4).
    #[arg(long)]
    naive: bool,
}

#[derive(Debug, Args)]
struct NormArgs {
    #[arg(long)]
    input: PathBuf,
    /// Order s >= 0 of the Barron and Sobolev norms.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    s: f64,
    /// barron | sobolev | schatten:<p> | op
    #[arg(long, default_value = "barron")]
    norm: String,
    /// `euclid` or the path of a weight file.
    #[arg(long, default_value = "euclid")]
    gamma: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Fixed,
    Direct,
    Both,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Potential operator file.
    #[arg(long = "v")]
    potential: PathBuf,
    /// Source operator file.
    #[arg(long = "t")]
    source: PathBuf,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long = "max-iter", default_value_t = 10_000)]
    max_iter: usize,
    #[arg(long, value_enum, default_value_t = Method::Fixed)]
    method: Method,
    #[arg(long, default_value = "euclid")]
    gamma: String,
    /// Where the solution operator file is written.
    #[arg(long, default_value = "solution.json")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Single cyclic factor order.
    #[arg(long, default_value_t = 2, conflicts_with = "factors")]
    n: usize,
    /// Comma-separated factor orders, e.g. 2,3.
    #[arg(long, value_delimiter = ',')]
    factors: Option<Vec<usize>>,
    #[arg(long, default_value = "euclid")]
    gamma: String,
    #[arg(long, default_value_t = 50)]
    trials: usize,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Comma-separated cyclic orders.
    #[arg(long = "n-list", value_delimiter = ',', default_value = "8,16,32,64")]
    n_list: Vec<String>,
    #[arg(long, default_value_t = 3)]
    reps: usize,
}

#[derive(Debug, Args)]
struct RandomArgs {
    /// Comma-separated factor orders.
    #[arg(long, value_delimiter = ',', required = true)]
    factors: Vec<usize>,
    /// complex-gaussian | random-unitary | rank-one | hermitian
    #[arg(long, default_value = "complex-gaussian")]
    dist: String,
    /// Rescale to this B^0 norm.
    #[arg(long)]
    b0: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    let seed = cli.seed;
    match cli.command {
        Command::Qft(a) => commands::qft(&a.io.input, a.io.output.as_deref(), a.naive),
        Command::Iqft(a) => commands::iqft(&a.input, a.output.as_deref()),
        Command::Norm(a) => commands::norm(&a.input, a.s, &a.norm, &a.gamma),
        Command::Solve(a) => commands::solve(&commands::SolveRequest {
            potential: &a.potential,
            source: &a.source,
            tol: a.tol,
            max_iter: a.max_iter,
            fixed: matches!(a.method, Method::Fixed | Method::Both),
            direct: matches!(a.method, Method::Direct | Method::Both),
            gamma: &a.gamma,
            output: &a.output,
        }),
        Command::Verify(a) => {
            let factors = a.factors.unwrap_or_else(|| vec![a.n]);
            commands::verify(&factors, &a.gamma, a.trials, seed)
        }
        Command::Bench(a) => commands::bench(&a.n_list, a.reps, seed),
        Command::Random(a) => commands::random(&a.factors, &a.dist, a.b0, a.output.as_deref(), seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
