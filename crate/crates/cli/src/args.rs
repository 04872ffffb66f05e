//! Command-line flags. Each subcommand's flags mirror the fields of
//! [`RunConfig`]; `run --config` reads the same fields from a file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{
    Command, ModeKind, OracleBlock, OracleKind, OutputBlock, QueryBlock, RunConfig, ScanBlock, SystemBlock,
};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "coxdiv", version, about = "Coxeter wall scans and Cayley-graph divergence")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Divergence function Div_lambda(n; delta) of an oracle.
    Divergence(DivergenceArgs),
    /// Pencils of pairwise parallel separating walls.
    Pencil(ScanArgs),
    /// Shielding of chambers from a wall by a parallel wall.
    Pwt(PwtArgs),
    /// Growth series of the ShortLex automaton.
    AutomatonStats(ScanArgs),
    /// Run a TOML config file.
    Run(RunArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// Shipped system name, e.g. affine-A2, pentagon, triangle-3-3-4.
    #[arg(long, conflicts_with = "matrix_file")]
    pub system: Option<String>,
    /// Coxeter matrix file.
    #[arg(long)]
    pub matrix_file: Option<PathBuf>,
}

impl SystemArgs {
    fn block(self) -> Option<SystemBlock> {
        (self.system.is_some() || self.matrix_file.is_some())
            .then_some(SystemBlock { name: self.system, matrix_file: self.matrix_file })
    }
}

#[derive(Debug, Args)]
pub struct DivergenceArgs {
    #[arg(long, value_enum)]
    pub oracle: OracleKind,
    #[arg(long)]
    pub q: Option<u8>,
    #[arg(long)]
    pub degree_bound: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub rank: Option<usize>,
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long)]
    pub n: usize,
    /// Exact rational in (0,1), e.g. 1/2.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub lambda: String,
    #[arg(long)]
    pub horizon_factor: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeKind>,
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write divergence.svg.
    #[arg(long)]
    pub plot: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Ball radius (maximum word length for automaton-stats).
    #[arg(long)]
    pub radius: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct PwtArgs {
    #[command(flatten)]
    pub scan: ScanArgs,
    /// Scan every wall met within the radius, not only the simple walls.
    #[arg(long)]
    pub all_walls: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the config's worker count.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Overrides the config's output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let scan = |command, a: ScanArgs, all_walls| RunConfig {
            command,
            workers: a.common.workers,
            oracle: None,
            system: a.system.block(),
            query: None,
            scan: Some(ScanBlock { radius: a.radius, all_walls }),
            output: OutputBlock { dir: a.common.out, plot: false },
        };
        Ok(match self.command {
            Sub::Divergence(a) => RunConfig {
                command: Command::Divergence,
                workers: a.common.workers,
                oracle: Some(OracleBlock { kind: a.oracle, q: a.q, degree_bound: a.degree_bound, d: a.d, rank: a.rank }),
                system: a.system.block(),
                query: Some(QueryBlock {
                    n: a.n,
                    delta: a.delta,
                    lambda: a.lambda,
                    horizon_factor: a.horizon_factor,
                    mode: a.mode,
                    pairs: a.pairs,
                    seed: a.seed,
                }),
                scan: None,
                output: OutputBlock { dir: a.common.out, plot: a.plot },
            },
            Sub::Pencil(a) => scan(Command::Pencil, a, false),
            Sub::Pwt(a) => scan(Command::Pwt, a.scan, a.all_walls),
            Sub::AutomatonStats(a) => scan(Command::AutomatonStats, a, false),
            Sub::Run(a) => {
                let mut config = RunConfig::load(&a.config)?;
                if a.workers.is_some() {
                    config.workers = a.workers;
                }
                if let Some(out) = a.out {
                    config.output.dir = out;
                }
                config
            }
        })
    }
}
