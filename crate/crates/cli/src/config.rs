//! Run configuration: TOML files and their validation into a [`Job`].

use std::path::{Path, PathBuf};

use coxdiv::coxeter::{parse_coxeter_file, CoxeterMatrix, CoxeterSystem};
use coxdiv::divergence::{DivergenceQuery, Mode};
use coxdiv::oracles::{OracleSpec, DEFAULT_DEGREE_BOUND};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Divergence,
    Pencil,
    Pwt,
    AutomatonStats,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Divergence => "divergence",
            Command::Pencil => "pencil",
            Command::Pwt => "pwt",
            Command::AutomatonStats => "automaton-stats",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    Sl2,
    Coxeter,
    Grid,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<QueryBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanBlock>,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleBlock {
    pub kind: OracleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
}

/// A Coxeter system, by shipped name or by matrix file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_file: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryBlock {
    pub n: usize,
    pub delta: String,
    #[serde(default = "zero")]
    pub lambda: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon_factor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn zero() -> String {
    "0".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanBlock {
    /// Ball radius for scans, maximum word length for automaton stats.
    pub radius: usize,
    /// Shielding scan over every wall met within the radius instead of the
    /// simple walls only.
    #[serde(default)]
    pub all_walls: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default)]
    pub plot: bool,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputBlock {
    fn default() -> Self {
        OutputBlock { dir: default_dir(), plot: false }
    }
}

/// A validated unit of work.
#[derive(Clone, Debug)]
pub enum Job {
    Divergence { oracle: OracleSpec, query: DivergenceQuery },
    Pencil { system: CoxeterSystem, radius: usize },
    Pwt { system: CoxeterSystem, radius: usize, all_walls: bool },
    AutomatonStats { system: CoxeterSystem, max_length: usize },
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.message().trim().to_string()))
    }

    /// Reads a config file. Relative paths inside it are resolved against
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut config = Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        config.output.dir = base.join(&config.output.dir);
        if let Some(file) = config.system.as_mut().and_then(|s| s.matrix_file.as_mut()) {
            *file = base.join(&*file);
        }
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks every field and builds the job. Nothing expensive runs here
    /// apart from building the Coxeter system.
    pub fn job(&self) -> Result<Job, CliError> {
        if self.workers == Some(0) {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        match self.command {
            Command::Divergence => {
                let block = self.oracle.as_ref().ok_or_else(|| missing("oracle"))?;
                let query = self.query.as_ref().ok_or_else(|| missing("query"))?.build()?;
                let oracle = match block.kind {
                    OracleKind::Sl2 => OracleSpec::Sl2 {
                        q: block.q.unwrap_or(2),
                        degree_bound: block.degree_bound.unwrap_or(DEFAULT_DEGREE_BOUND),
                    },
                    OracleKind::Coxeter => OracleSpec::Coxeter { system: self.system()? },
                    OracleKind::Grid => OracleSpec::Grid { d: block.d.ok_or_else(|| missing("oracle.d"))? },
                    OracleKind::Free => OracleSpec::Free { rank: block.rank.ok_or_else(|| missing("oracle.rank"))? },
                };
                Ok(Job::Divergence { oracle, query })
            }
            Command::Pencil => Ok(Job::Pencil { system: self.system()?, radius: self.scan()?.radius }),
            Command::Pwt => {
                let scan = self.scan()?;
                Ok(Job::Pwt { system: self.system()?, radius: scan.radius, all_walls: scan.all_walls })
            }
            Command::AutomatonStats => {
                Ok(Job::AutomatonStats { system: self.system()?, max_length: self.scan()?.radius })
            }
        }
    }

    fn scan(&self) -> Result<&ScanBlock, CliError> {
        self.scan.as_ref().ok_or_else(|| missing("scan"))
    }

    fn system(&self) -> Result<CoxeterSystem, CliError> {
        let block = self.system.as_ref().ok_or_else(|| missing("system"))?;
        match (&block.name, &block.matrix_file) {
            (Some(name), None) => CoxeterSystem::named(name).map_err(CliError::Core),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                let matrix: CoxeterMatrix = parse_coxeter_file(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
                let name = path.file_stem().map_or("matrix".into(), |s| s.to_string_lossy().into_owned());
                CoxeterSystem::new(name, matrix).map_err(CliError::Core)
            }
            _ => Err(CliError::Config("system needs exactly one of `name` and `matrix_file`".into())),
        }
    }

    /// Seed recorded in the manifest.
    pub fn seed(&self) -> Option<u64> {
        self.query.as_ref().filter(|q| q.mode == Some(ModeKind::Sampled)).map(|q| q.seed.unwrap_or(0))
    }
}

impl QueryBlock {
    pub fn build(&self) -> Result<DivergenceQuery, CliError> {
        let delta = rational("delta", &self.delta)?;
        let lambda = rational("lambda", &self.lambda)?;
        let mode = match self.mode.unwrap_or(ModeKind::Exhaustive) {
            ModeKind::Exhaustive => {
                if self.pairs.is_some() {
                    return Err(CliError::Config("`pairs` only applies to sampled mode".into()));
                }
                Mode::Exhaustive
            }
            ModeKind::Sampled => Mode::Sampled {
                pairs: self.pairs.ok_or_else(|| missing("query.pairs"))?,
                seed: self.seed.unwrap_or(0),
            },
        };
        let mut query = DivergenceQuery {
            n: self.n,
            delta,
            lambda,
            horizon_factor: Rational64::from_integer(8),
            mode,
        };
        if let Some(h) = &self.horizon_factor {
            query.horizon_factor = rational("horizon_factor", h)?;
        }
        query.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(query)
    }
}

/// Exact rational from `p/q` or an integer.
pub fn rational(field: &str, s: &str) -> Result<Rational64, CliError> {
    let t = s.trim();
    let bad = || CliError::Config(format!("{field} must be an exact rational such as 1/2, got `{s}`"));
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p.trim().parse::<i64>().map_err(|_| bad())?, q.trim().parse::<i64>().map_err(|_| bad())?),
        None => (t.parse::<i64>().map_err(|_| bad())?, 1),
    };
    if den == 0 {
        return Err(bad());
    }
    Ok(Rational64::new(num, den))
}

fn missing(what: &str) -> CliError {
    CliError::Config(format!("missing `{what}`"))
}
