use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hypertree_cli::config::{Config, Overrides};
use hypertree_cli::{commands, exit_code};

/// Simulation and verification laboratory for random 2-dimensional
/// simplicial complexes: determinantal hypertree sampling, one-out and
/// Linial-Meshulam models, exact homology over F₂/F_p/Z, step-kernel
/// functionals, and exact probability formulas with proven upper bounds.
#[derive(Parser)]
#[command(name = "hypertree", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Every config key has a flag of the same name; flags override the file.
#[derive(Args, Clone, Default)]
struct ConfigFlags {
    /// Configuration file with flat `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sampling model: determinantal, one-out or linial-meshulam.
    #[arg(long)]
    model: Option<String>,
    /// Vertex count, or a comma-separated grid for `experiment`.
    #[arg(long)]
    n: Option<String>,
    /// Number of samples / trials per n.
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed; every trial stream is derived from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Triangle probability (linial-meshulam) or rate parameter (graphon).
    #[arg(long)]
    p: Option<f64>,
    /// Output file or directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for `experiment`.
    #[arg(long)]
    threads: Option<usize>,
    /// Comma-separated primes for mod-p homology and torsion.
    #[arg(long)]
    primes: Option<String>,
    /// Largest n for Smith normal forms.
    #[arg(long = "snf_cap")]
    snf_cap: Option<u32>,
    /// Largest n for mod-p ranks beyond F₂.
    #[arg(long = "fp_cap")]
    fp_cap: Option<u32>,
    /// Largest n for integer incidence determinants.
    #[arg(long = "det_cap")]
    det_cap: Option<u32>,
    /// Exponent for the mean-dimension scaling column.
    #[arg(long)]
    alpha: Option<f64>,
}

impl ConfigFlags {
    fn resolve(&self) -> hypertree_core::Result<Config> {
        let overrides = Overrides {
            model: self.model.clone(),
            n: self.n.clone(),
            trials: self.trials,
            seed: self.seed,
            p: self.p,
            out: self.out.clone(),
            threads: self.threads,
            primes: self.primes.clone(),
            snf_cap: self.snf_cap,
            fp_cap: self.fp_cap,
            det_cap: self.det_cap,
            alpha: self.alpha,
        };
        Config::resolve(self.config.as_deref(), &overrides)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Draw complexes from a model.
    Sample {
        #[command(flatten)]
        flags: ConfigFlags,
    },
    /// Exact homology of a complex file.
    Homology {
        #[command(flatten)]
        flags: ConfigFlags,
        /// Complex file to analyze.
        #[arg(long)]
        input: PathBuf,
    },
    /// List every hypertree on [n] with its homology order (n <= 6).
    Enumerate {
        #[command(flatten)]
        flags: ConfigFlags,
    },
    /// Exact cocycle / containment probabilities.
    Prob {
        #[command(flatten)]
        flags: ConfigFlags,
        /// Graph file: probability that this graph is a cocycle.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Complex file: probability that it is contained in the sample.
        #[arg(long)]
        complex: Option<PathBuf>,
    },
    /// Closed-form upper bounds for the same log-probabilities.
    Bound {
        #[command(flatten)]
        flags: ConfigFlags,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        complex: Option<PathBuf>,
    },
    /// Norms and functionals of a step kernel file.
    Graphon {
        #[command(flatten)]
        flags: ConfigFlags,
        /// Kernel file (m header line, then an m x m symmetric matrix).
        #[arg(long)]
        kernel: PathBuf,
        /// Truncation depth for the truncated functional.
        #[arg(long, default_value_t = 1.0)]
        k: f64,
    },
    /// Monte Carlo grid over n; writes trial and summary tables.
    Experiment {
        #[command(flatten)]
        flags: ConfigFlags,
    },
    /// Self-check battery (fast < 1 minute, full adds exhaustive sweeps).
    Verify {
        #[command(flatten)]
        flags: ConfigFlags,
        /// fast or full.
        #[arg(long, default_value = "fast")]
        level: String,
    },
    /// Goodness of fit of the determinantal sampler at n = 5.
    Gof {
        #[command(flatten)]
        flags: ConfigFlags,
    },
    /// p-torsion rank distribution with heuristic reference masses.
    Torsion {
        #[command(flatten)]
        flags: ConfigFlags,
        /// Use exact enumeration instead of sampling (n <= 6).
        #[arg(long)]
        exhaustive: bool,
    },
}

fn run(cli: Cli) -> hypertree_core::Result<()> {
    match &cli.cmd {
        Cmd::Sample { flags } => commands::cmd_sample(&flags.resolve()?),
        Cmd::Homology { flags, input } => commands::cmd_homology(&flags.resolve()?, input),
        Cmd::Enumerate { flags } => commands::cmd_enumerate(&flags.resolve()?),
        Cmd::Prob { flags, graph, complex } => {
            commands::cmd_prob(&flags.resolve()?, graph, complex)
        }
        Cmd::Bound { flags, graph, complex } => {
            commands::cmd_bound(&flags.resolve()?, graph, complex)
        }
        Cmd::Graphon { flags, kernel, k } => commands::cmd_graphon(&flags.resolve()?, kernel, *k),
        Cmd::Experiment { flags } => commands::cmd_experiment(&flags.resolve()?),
        Cmd::Verify { flags, level } => {
            let _ = flags.resolve()?;
            commands::cmd_verify(level)
        }
        Cmd::Gof { flags } => commands::cmd_gof(&flags.resolve()?),
        Cmd::Torsion { flags, exhaustive } => {
            commands::cmd_torsion(&flags.resolve()?, *exhaustive)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(u8::try_from(exit_code(&e)).unwrap_or(1))
        }
    }
}
