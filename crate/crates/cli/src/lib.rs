//! Command-line front end for `corrdyn`.
//!
//! Every subcommand reads a JSON scenario (see `docs/scenario-schema.md`),
//! evaluates it on a time grid or a state grid and writes CSV tables whose
//! preamble records the scenario hash, the tolerances in force and any
//! singular times that were skipped.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod error;
pub mod scenario;
pub mod svg;
pub mod table;

pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "corrdyn",
    version,
    about = "Reduced dynamics with initial system-environment correlations"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by all subcommands.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Scenario JSON file.
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Overrides the scenario's `time_grid.t_max`.
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    /// Overrides the scenario's `time_grid.steps`.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Overrides the positive-semidefiniteness tolerance.
    #[arg(long, global = true)]
    pub tol_psd: Option<f64>,
    /// Overrides the condition number above which a map counts as singular.
    #[arg(long, global = true)]
    pub cond_threshold: Option<f64>,
    /// Step across singular times instead of failing.
    #[arg(long, global = true)]
    pub skip_singular: bool,
    /// Evaluate initial states outside the physical domain (with a warning).
    #[arg(long, global = true)]
    pub allow_unphysical: bool,
    /// Seed for any random sampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

impl Default for CommonArgs {
    fn default() -> Self {
        Self {
            scenario: None,
            out: PathBuf::from("out"),
            t_max: None,
            steps: None,
            tol_psd: None,
            cond_threshold: None,
            skip_singular: false,
            allow_unphysical: false,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainMode {
    /// `(|ρ01|, z)` half-plane through the Bloch ball.
    CrossSection,
    /// Cubic lattice inside the Bloch ball.
    Lattice,
    /// Random states drawn with `--seed`.
    Sample,
    /// States read from the file given with `--states`.
    List,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureTag {
    Fig1,
    Fig2,
    Fig3,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact, linear-map and master-equation trajectories.
    Evolve,
    /// Physical-domain membership over a grid or list of initial states.
    Domain {
        #[arg(long, value_enum, default_value = "cross-section")]
        mode: DomainMode,
        /// Points per axis for grid modes.
        #[arg(long, default_value_t = 41)]
        resolution: usize,
        /// Number of states in `sample` mode.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// JSON array of matrices for `list` mode.
        #[arg(long)]
        states: Option<PathBuf>,
    },
    /// Generator, canonical Hamiltonian and decay channels over time.
    Generator {
        /// Explicit evaluation times; the scenario grid is used when absent.
        #[arg(long = "t", value_delimiter = ',')]
        times: Vec<f64>,
    },
    /// Complete-positivity sweep of the linear map.
    Cpcheck,
    /// Data bundles for the built-in figure scenarios.
    Figures {
        #[arg(value_enum, default_value = "all")]
        tag: FigureTag,
        /// Points per axis for the domain cross-sections.
        #[arg(long, default_value_t = 101)]
        resolution: usize,
        /// Also write SVG previews.
        #[arg(long)]
        svg: bool,
    },
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let common = &cli.common;
    match &cli.command {
        Command::Evolve => commands::evolve::run(common).map(|_| ()),
        Command::Domain {
            mode,
            resolution,
            samples,
            states,
        } => commands::domain::run(common, *mode, *resolution, *samples, states.as_deref())
            .map(|_| ()),
        Command::Generator { times } => commands::generator::run(common, times).map(|_| ()),
        Command::Cpcheck => commands::cpcheck::run(common).map(|_| ()),
        Command::Figures {
            tag,
            resolution,
            svg,
        } => commands::figures::run(common, *tag, *resolution, *svg),
    }
}
