//! Command-line front end: instance generation, reduction, solving,
//! embedding and scaling benchmarks.

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod bench;
mod embed;
mod error;
mod gen;
mod io;
mod manifest;
mod reduce;
mod solve;

use error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "scp-anneal", version, about = "Set Cover with Pairs via Ising annealing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate random dummy-free instances.
    Gen(GenArgs),
    /// Reduce an instance to Ising JSON.
    Reduce(ReduceArgs),
    /// Solve an instance with one backend and check the result.
    Solve(SolveArgs),
    /// Embed an instance's interaction graph into a Chimera graph.
    Embed(EmbedArgs),
    /// Measure runtime scaling over random ensembles.
    Bench(BenchArgs),
    /// Fit log2(T) against M from a CSV with columns M and T_star.
    Fit(FitArgs),
}

#[derive(Debug, Args)]
struct OutDir {
    /// Output directory.
    #[arg(long, env = "SCP_ANNEAL_OUT_DIR", default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Ground elements.
    #[arg(long)]
    n: usize,
    /// Cover objects.
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Debug, Args)]
struct ReductionArgs {
    /// Objective weight in (0, 1), as p/q or a decimal.
    #[arg(long, default_value = "1/4")]
    alpha: String,
    /// Drop the penalty on the top of each OR chain.
    #[arg(long)]
    no_top_penalty: bool,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    instance: PathBuf,
    #[command(flatten)]
    reduction: ReductionArgs,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Backend {
    Qa,
    Sa,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Criterion {
    /// Run ends at the exact ground energy.
    Energy,
    /// Run's selection bits form a valid (not necessarily minimum) cover.
    Cover,
}

#[derive(Debug, Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Target success probability.
    #[arg(long, default_value_t = 0.25)]
    target_p: f64,
    /// Largest anneal time tried.
    #[arg(long, default_value_t = 4096)]
    t_max: u64,
    /// Integrator local error tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Sweep counts tried by simulated annealing.
    #[arg(long, value_delimiter = ',', default_value = "1,2,5,10,20,50,100,200,500,1000")]
    sweeps_grid: Vec<usize>,
    /// Independent runs per sweep count when estimating w(S).
    #[arg(long, default_value_t = 200)]
    runs: usize,
    /// What counts as a successful simulated-annealing run.
    #[arg(long, value_enum, default_value_t = Criterion::Energy)]
    criterion: Criterion,
    /// Inverse temperature at the first sweep.
    #[arg(long, default_value_t = scp_anneal::sa::DEFAULT_BETA_INIT)]
    beta_init: f64,
    /// Inverse temperature at the last sweep.
    #[arg(long, default_value_t = scp_anneal::sa::DEFAULT_BETA_FINAL)]
    beta_final: f64,
}

#[derive(Debug, Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum)]
    backend: Backend,
    #[command(flatten)]
    reduction: ReductionArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write the run record here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the simulated-annealing T(S) curve as CSV.
    #[arg(long)]
    curve_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EmbedArgs {
    instance: PathBuf,
    /// Base name of the written files.
    #[arg(long, default_value = "embedding")]
    name: String,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Spin-count range, e.g. 3..15 (inclusive).
    #[arg(long, value_parser = parse_range, default_value = "3..10")]
    spins: RangeInclusive<usize>,
    /// Instance shapes as NxM (ground x cover), comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_shape)]
    shapes: Vec<(usize, usize)>,
    /// Instances per spin count.
    #[arg(long, default_value_t = 10)]
    per_size: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "qa")]
    backend: Vec<Backend>,
    /// Generator draws before giving up on filling every size.
    #[arg(long, default_value_t = 1_000_000)]
    max_draws: u64,
    #[command(flatten)]
    solver: SolverArgs,
    #[command(flatten)]
    out: OutDir,
}

#[derive(Debug, Args)]
struct FitArgs {
    csv: PathBuf,
    /// Column holding the times.
    #[arg(long, default_value = "T_star")]
    column: String,
    /// Fit per-M medians instead of every row.
    #[arg(long)]
    medians: bool,
}

fn parse_range(text: &str) -> Result<RangeInclusive<usize>, String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {text:?}"))?;
    let hi = hi.trim_start_matches('=');
    let lo: usize = lo.parse().map_err(|e| format!("{e}"))?;
    let hi: usize = hi.parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err(format!("empty range {text}"));
    }
    Ok(lo..=hi)
}

fn parse_shape(text: &str) -> Result<(usize, usize), String> {
    let (n, m) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NxM, got {text:?}"))?;
    Ok((n.parse().map_err(|e| format!("{e}"))?, m.parse().map_err(|e| format!("{e}"))?))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Gen(args) => gen::run(args),
        Command::Reduce(args) => reduce::run(args),
        Command::Solve(args) => solve::run(args),
        Command::Embed(args) => embed::run(args),
        Command::Bench(args) => bench::run(args),
        Command::Fit(args) => bench::fit(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
