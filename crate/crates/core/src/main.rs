use std::path::PathBuf;
use std::process::exit;

use clap::{Args, Parser, Subcommand};

use spansub::cli::{cmd_bench, cmd_gen, cmd_solve, cmd_verify, GenKind};
use spansub::hamilton::Budget;
use spansub::SolverParams;

#[derive(Parser)]
#[command(name = "spansub", version, about = "Spanning subdivisions in dense digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a host digraph or a pattern
    Gen {
        #[command(subcommand)]
        kind: Gen,
    },
    /// Find a spanning subdivision of PATTERN in DIGRAPH
    Solve {
        digraph: PathBuf,
        pattern: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Check a certificate against its host and pattern
    Verify {
        digraph: PathBuf,
        pattern: PathBuf,
        certificate: PathBuf,
    },
    /// Sweep a key=value grid and write one CSV row per cell
    Bench {
        config: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum Gen {
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    Extremal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    Pattern {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long = "C")]
    c: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    retries: Option<usize>,
    /// Hamiltonian search steps per restart
    #[arg(long)]
    budget: Option<u64>,
}

impl ParamArgs {
    fn resolve(&self) -> SolverParams {
        let d = SolverParams::default();
        SolverParams {
            epsilon: self.epsilon.unwrap_or(d.epsilon),
            c: self.c.unwrap_or(d.c),
            alpha: self.alpha.unwrap_or(d.alpha),
            beta: self.beta.unwrap_or(d.beta),
            rho: self.rho.unwrap_or(d.rho),
            gamma: self.gamma.unwrap_or(d.gamma),
            seed: self.seed,
            retries: self.retries.unwrap_or(d.retries),
            budget: Budget {
                steps_per_restart: self.budget,
                ..d.budget
            },
        }
    }
}

fn main() {
    let code = match Cli::parse().command {
        Command::Gen { kind } => match kind {
            Gen::Random { n, epsilon, seed, out } => cmd_gen(GenKind::Random { n, epsilon, seed }, &out),
            Gen::Extremal { n, m, k, out } => cmd_gen(GenKind::Extremal { n, m, k }, &out),
            Gen::Pattern { m, seed, out } => cmd_gen(GenKind::Pattern { m, seed }, &out),
        },
        Command::Solve {
            digraph,
            pattern,
            out,
            params,
        } => cmd_solve(&digraph, &pattern, &params.resolve(), &out),
        Command::Verify {
            digraph,
            pattern,
            certificate,
        } => cmd_verify(&digraph, &pattern, &certificate),
        Command::Bench { config, out } => cmd_bench(&config, &out),
    };
    exit(code);
}
