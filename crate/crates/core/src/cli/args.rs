//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "dyncert",
    version,
    about = "Quantumness certification by three-time position probing"
)]
pub struct Cli {
    /// Flat key = value configuration file (flags take precedence).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Reuse spectrum slices from the cache directory.
    #[arg(long, global = true)]
    pub cache: bool,
    /// Cache directory (default: $DYNCERT_CACHE_DIR, else .dyncert-cache).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
    /// Output file (directory for wigner and make-figures); stdout otherwise.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Harmonic,
    Kerr,
    Pendulum,
    Morse,
    Well,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Anharmonicity (Kerr, pendulum).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Morse depth parameter λ = 2D_e/ħω₀.
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trapping times over an energy grid and the energy window at τ.
    Bounds {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        tau: Option<f64>,
        /// Energy grid points.
        #[arg(long)]
        points: Option<usize>,
        /// Grid top for unbounded windows.
        #[arg(long)]
        e_max: Option<f64>,
    },
    /// Maximum quantum score, τ scans and harmonic-approximation scenarios.
    Score {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        tau: Option<f64>,
        /// Keep levels 0..=nmax instead of the window at τ.
        #[arg(long)]
        nmax: Option<usize>,
        /// Emit a CSV curve over a τ grid.
        #[arg(long, conflicts_with = "scenario")]
        scan: bool,
        #[arg(long, requires = "scan")]
        tau_min: Option<f64>,
        #[arg(long, requires = "scan")]
        tau_max: Option<f64>,
        /// Grid intervals for --scan.
        #[arg(long, requires = "scan")]
        points: Option<usize>,
        /// Emit the three-scenario comparison.
        #[arg(long)]
        scenario: bool,
        /// Scenario truncation (4 or 6).
        #[arg(long, requires = "scenario")]
        nhat: Option<usize>,
    },
    /// Monte Carlo run of the measurement protocol.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        /// psi6, psi4, optimal, or file:PATH.
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        rounds: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Per-round CSV of the first --audit-rounds rounds.
        #[arg(long)]
        audit: Option<PathBuf>,
        #[arg(long)]
        audit_rounds: Option<u64>,
    },
    /// Wigner grid and position marginals at the three probing times.
    Wigner {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        state: Option<String>,
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long)]
        nmax: Option<usize>,
        /// Discrete angular-momentum kernel (pendulum).
        #[arg(long)]
        angular: bool,
        #[arg(long)]
        q_points: Option<usize>,
        #[arg(long)]
        p_points: Option<usize>,
        #[arg(long)]
        p_max: Option<f64>,
        #[arg(long)]
        m_max: Option<i64>,
    },
    /// Regenerate all figure data into a directory tree.
    MakeFigures {
        /// Harmonic truncation for the τ curve.
        #[arg(long)]
        nmax: Option<usize>,
    },
}
