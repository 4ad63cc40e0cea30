mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lll_core::Error;

use config::{Format, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "lll", version, about = "Abstract and variable LLL boundaries, gap classification and witnesses")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct GlobalOpts {
    /// Config file (.toml or .json) with the same keys as the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Solver tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Bisection width for the discrete boundary search.
    #[arg(long, global = true)]
    pub lambda_tol: Option<f64>,
    /// Cap on grid cells in the discrete search.
    #[arg(long, global = true)]
    pub cells_cap: Option<u64>,
    /// Multi-start count in the discrete search.
    #[arg(long, global = true)]
    pub starts: Option<usize>,
    /// Function evaluations per start.
    #[arg(long, global = true)]
    pub max_evals: Option<usize>,
    /// Cap on event subsets examined by the classifier.
    #[arg(long, global = true)]
    pub subset_cap: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
}

impl GlobalOpts {
    pub fn resolve(&self) -> lll_core::Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(t) = self.tol {
            c.tol = t;
            c.search_tol = t;
        }
        if let Some(t) = self.lambda_tol {
            c.lambda_tol = t;
        }
        if let Some(x) = self.cells_cap {
            c.cells_cap = x;
        }
        if let Some(x) = self.starts {
            c.starts = x;
        }
        if let Some(x) = self.max_evals {
            c.max_evals = x;
        }
        if let Some(x) = self.subset_cap {
            c.subset_cap = x;
        }
        if let Some(f) = self.format {
            c.format = Some(f);
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        c.validate()?;
        Ok(c)
    }
}

/// Instance source: a bigraph file or the cycle bigraph on `n` events.
#[derive(Args, Debug, Clone)]
pub struct Instance {
    /// Bigraph JSON file ("-" for stdin).
    #[arg(long)]
    pub bigraph: Option<PathBuf>,
    /// Use the cycle bigraph on this many events.
    #[arg(long, conflicts_with = "bigraph")]
    pub n: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMethod {
    Auto,
    Shearer,
    Tree,
    Cycle,
    Discrete,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessMethod {
    Tree,
    Cycle,
    CycleGapful,
    SmallExclusive,
    H43,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    Exterior,
    Boundary,
    Mup,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Emit a bigraph instance as JSON.
    Generate {
        /// cycle | comb | upper-comb | hstar | canonical-of | random-tree
        family: String,
        params: Vec<usize>,
        /// Dependency graph JSON for canonical-of.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Boundary scalar along a direction.
    Boundary {
        #[arg(long, value_enum, default_value = "auto")]
        method: BoundaryMethod,
        #[command(flatten)]
        instance: Instance,
        /// Comma-separated direction.
        #[arg(long = "dir")]
        direction: String,
    },
    /// Shearer values at a probability vector.
    Shearer {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: String,
    },
    /// Abstract boundary scalar along a direction.
    ShearerBoundary {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "dir")]
        direction: String,
    },
    /// Gap classification with a rule trace.
    Classify {
        #[command(flatten)]
        instance: Instance,
        /// Also compare both boundaries along seeded random directions.
        #[arg(long)]
        numeric: bool,
        #[arg(long, default_value_t = 5)]
        dirs: usize,
    },
    /// Emit a witness event set.
    Witness {
        #[arg(long, value_enum)]
        method: WitnessMethod,
        #[command(flatten)]
        instance: Instance,
        /// Direction for tree and cycle witnesses (defaults to all ones).
        #[arg(long = "dir")]
        direction: Option<String>,
        /// Probabilities for the h43 witness.
        #[arg(long)]
        p: Option<String>,
        /// Emit the evaluation (measures, union, exclusivity) instead.
        #[arg(long)]
        evaluate: bool,
    },
    /// Brute-force discrete oracles.
    Oracle {
        #[arg(value_enum)]
        kind: OracleKind,
        #[command(flatten)]
        instance: Instance,
        /// Point for exterior, direction for boundary, probabilities for mup.
        #[arg(long, alias = "q", alias = "p", alias = "dir")]
        vector: String,
    },
    /// Boundary comparison along seeded random directions.
    Sweep {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } => 3,
        Error::NonConvergence { .. } => 4,
        _ => 2,
    }
}

fn init_threads() -> lll_core::Result<()> {
    if let Ok(v) = std::env::var("LLL_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::InvalidInput(format!("LLL_THREADS must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|_| commands::run(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
