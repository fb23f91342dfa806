use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

mod pipeline;

use pipeline::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "qfactor",
    version,
    about = "Factor integers by minimizing Ising cost functions"
)]
struct Cli {
    /// Rebuild the built-in 15 and 143 tables and compare them exactly.
    #[arg(long)]
    golden: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Encode, reduce, optionally embed, solve and decode one integer.
    Run(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Exact,
    Sa,
    Adiabatic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EmbedArg {
    None,
    Grouped,
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChainArg {
    /// `−max(|h|, |J|)` on every chain.
    MaxParam,
    /// `−max(|h_i| + Σ_j |J_ij|, 1)` per chain.
    Bounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum EmitArg {
    Qubo,
    Ising,
    Blocks,
    Embedding,
    Histogram,
    All,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Odd composite to factor.
    pub n: String,
    #[arg(long, value_enum, default_value = "table")]
    pub method: MethodArg,
    /// Bit length of the first factor; requires --l2.
    #[arg(long, requires = "l2")]
    pub l1: Option<u32>,
    #[arg(long, requires = "l1")]
    pub l2: Option<u32>,
    /// Table block widths from column 1, e.g. 2,2,3.
    #[arg(long, value_delimiter = ',', conflicts_with = "block_width")]
    pub widths: Option<Vec<u32>>,
    /// Uniform table block width.
    #[arg(long)]
    pub block_width: Option<u32>,
    /// Carry bits passed on by each non-final block.
    #[arg(long, value_delimiter = ',')]
    pub carry_widths: Option<Vec<u32>>,
    /// Defaults to exact for at most 26 spins, otherwise sa.
    #[arg(long, value_enum)]
    pub solver: Option<SolverArg>,
    #[arg(long, value_enum, default_value = "none")]
    pub embed: EmbedArg,
    #[arg(long, value_enum, default_value = "max-param")]
    pub chain_strength: ChainArg,
    /// Chimera dimensions rows,cols,shore.
    #[arg(long, value_delimiter = ',', num_args = 1, default_value = "16,16,4")]
    pub chimera: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1000)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Total anneal time for the adiabatic solver.
    #[arg(long, default_value_t = 100.0)]
    pub anneal_time: f64,
    /// Artifacts to write; repeat or separate with commas.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub emit: Vec<EmitArg>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Stop after encoding and writing artifacts.
    #[arg(long)]
    pub emit_only: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.golden {
        return golden();
    }
    let Some(Command::Run(args)) = cli.command else {
        eprintln!("nothing to do; try `qfactor run <N>` or `qfactor --golden`");
        return ExitCode::from(2);
    };
    let n: BigUint = match args.n.parse() {
        Ok(n) => n,
        Err(_) => {
            eprintln!("error: `{}` is not a non-negative integer", args.n);
            return ExitCode::from(2);
        }
    };
    match pipeline::run(&n, &args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn golden() -> ExitCode {
    let checks = qfactor::golden::run_golden_checks();
    let mut ok = true;
    for c in &checks {
        println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
        if !c.passed {
            println!("  got: {}", c.detail);
            ok = false;
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(Failure::Internal(String::new()).code())
    }
}
