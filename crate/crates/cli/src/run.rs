use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use coxdiv::coxeter::CoxeterSystem;
use coxdiv::divergence::{divergence_function, DivergenceReport, GraphOracle, RowStatus, DEFAULT_MEMORY_BUDGET};
use coxdiv::oracles::OracleVisitor;
use coxdiv::walls::{lemma1_scan, pwt_scan, pwt_scan_walls, walls_up_to};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Job, RunConfig};
use crate::plot::render_svg;
use crate::CliError;

/// Overrides the divergence memory budget, in ball vertices.
pub const MEMORY_BUDGET_ENV: &str = "COXDIV_MEMORY_BUDGET";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    pub runtime_secs: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub workers: usize,
    pub summary: BTreeMap<String, String>,
    /// SHA-256 of every output file, by file name.
    pub digests: BTreeMap<String, String>,
    pub config: RunConfig,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub csv: String,
    pub manifest: RunManifest,
    /// Some divergence row stopped at the horizon; outputs are written but
    /// the run counts as over budget.
    pub horizon_exceeded: bool,
}

struct Output {
    files: Vec<(String, String)>,
    summary: BTreeMap<String, String>,
    horizon_exceeded: bool,
}

pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let job = config.job()?;
    let budget = memory_budget()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {:?} workers: {e}", config.workers)))?;
    let workers = pool.current_num_threads();
    let out = pool.install(|| execute(&job, config.output.plot, budget))?;
    let runtime = start.elapsed().as_secs_f64();

    let dir = config.output.dir.clone();
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let mut digests = BTreeMap::new();
    for (name, body) in &out.files {
        write(&dir.join(name), body)?;
        digests.insert(name.clone(), hex(&Sha256::digest(body.as_bytes())));
    }
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: config.command.as_str().to_string(),
        runtime_secs: (runtime * 1000.0).round() / 1000.0,
        seed: config.seed(),
        workers,
        summary: out.summary,
        digests,
        config: config.clone(),
    };
    let text = toml::to_string(&manifest).map_err(|e| CliError::Config(e.to_string()))?;
    write(&dir.join("manifest.toml"), &text)?;
    Ok(RunOutcome {
        dir,
        csv: out.files[0].1.clone(),
        manifest,
        horizon_exceeded: out.horizon_exceeded,
    })
}

fn write(path: &Path, body: &str) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|e| CliError::io(path, e))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn memory_budget() -> Result<usize, CliError> {
    match std::env::var(MEMORY_BUDGET_ENV) {
        Err(_) => Ok(DEFAULT_MEMORY_BUDGET),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{MEMORY_BUDGET_ENV} must be a vertex count, got `{v}`"))),
    }
}

struct Divergence {
    query: coxdiv::divergence::DivergenceQuery,
    budget: usize,
}

impl OracleVisitor for Divergence {
    type Output = coxdiv::Result<DivergenceReport>;

    fn visit<O: GraphOracle>(self, oracle: &O) -> Self::Output {
        divergence_function(oracle, &self.query, self.budget)
    }
}

fn execute(job: &Job, plot: bool, budget: usize) -> Result<Output, CliError> {
    let mut summary = BTreeMap::new();
    let mut files = Vec::new();
    let mut horizon_exceeded = false;
    match job {
        Job::Divergence { oracle, query } => {
            let report = oracle.visit(Divergence { query: query.clone(), budget })??;
            horizon_exceeded = report.rows.iter().any(|r| r.status == RowStatus::HorizonExceeded);
            summary.insert("oracle".into(), report.oracle.clone());
            summary.insert("box_radius".into(), report.box_radius.to_string());
            summary.insert("box_vertices".into(), report.box_vertices.to_string());
            if let Some(r) = report.max_ratio() {
                summary.insert("max_ratio".into(), format!("{r:.4}"));
            }
            if let Some(row) = report.rows.iter().find(|r| r.unbounded()) {
                summary.insert("first_unbounded_n".into(), row.n.to_string());
            }
            files.push(("divergence.csv".into(), report.to_csv()));
            if plot {
                files.push(("divergence.svg".into(), render_svg(&report)?));
            }
        }
        Job::Pencil { system, radius } => {
            let report = lemma1_scan(system, *radius)?;
            summary.insert("system".into(), system.name().into());
            summary.insert("C_hat".into(), report.c_hat.to_string());
            files.push(("pencil.csv".into(), report.to_csv()));
        }
        Job::Pwt { system, radius, all_walls } => {
            let report = if *all_walls {
                pwt_scan_walls(system, *radius, &walls_up_to(system, *radius))?
            } else {
                pwt_scan(system, *radius)?
            };
            summary.insert("system".into(), system.name().into());
            summary.insert("walls".into(), report.rows.len().to_string());
            let not_found = report.rows.iter().filter(|r| r.cpp_hat.is_none()).count();
            summary.insert("not_found".into(), not_found.to_string());
            if let Some(max) = report.rows.iter().filter_map(|r| r.cpp_hat).max() {
                summary.insert("max_Cpp_hat".into(), max.to_string());
            }
            files.push(("pwt.csv".into(), report.to_csv()));
        }
        Job::AutomatonStats { system, max_length } => {
            let automaton = system.automaton();
            summary.insert("system".into(), system.name().into());
            summary.insert("small_roots".into(), system.small_roots().len().to_string());
            summary.insert("states".into(), automaton.num_states().to_string());
            summary.insert("finite".into(), system.is_finite().to_string());
            files.push(("automaton.csv".into(), automaton_csv(system, *max_length)));
        }
    }
    Ok(Output { files, summary, horizon_exceeded })
}

/// Columns `length,words,cumulative`: accepted words of each length.
pub fn automaton_csv(system: &CoxeterSystem, max_length: usize) -> String {
    let mut out = String::from("length,words,cumulative\n");
    let mut total = 0u128;
    for (len, count) in system.automaton().count_by_length(max_length).into_iter().enumerate() {
        total += count;
        out.push_str(&format!("{len},{count},{total}\n"));
    }
    out
}

pub fn parse_automaton_csv(text: &str) -> Result<Vec<(usize, u128, u128)>, CliError> {
    let mut lines = text.lines();
    if lines.next() != Some("length,words,cumulative") {
        return Err(CliError::Config("expected columns length,words,cumulative".into()));
    }
    let mut rows = Vec::new();
    let mut total = 0u128;
    for (i, line) in lines.enumerate() {
        let bad = || CliError::Config(format!("bad automaton row `{line}`"));
        let cells: Vec<&str> = line.split(',').collect();
        let [len, words, cumulative] = cells[..] else { return Err(bad()) };
        let row = (
            len.parse::<usize>().map_err(|_| bad())?,
            words.parse::<u128>().map_err(|_| bad())?,
            cumulative.parse::<u128>().map_err(|_| bad())?,
        );
        total += row.1;
        if row.0 != i || row.2 != total {
            return Err(bad());
        }
        rows.push(row);
    }
    Ok(rows)
}
