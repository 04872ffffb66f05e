use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::divergence::DivergenceQuery;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowStatus {
    /// Every configuration was resolved exactly.
    Exact,
    /// Some configuration is disconnected.
    Unbounded,
    /// Some configuration needs a detour longer than the horizon; the value
    /// is the largest resolved detour.
    HorizonExceeded,
    /// Sampled run; the value is a lower bound.
    LowerBound,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Exact => "EXACT",
            RowStatus::Unbounded => "UNBOUNDED",
            RowStatus::HorizonExceeded => "HORIZON_EXCEEDED",
            RowStatus::LowerBound => "LOWER_BOUND",
        })
    }
}

impl FromStr for RowStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "EXACT" => RowStatus::Exact,
            "UNBOUNDED" => RowStatus::Unbounded,
            "HORIZON_EXCEEDED" => RowStatus::HorizonExceeded,
            "LOWER_BOUND" => RowStatus::LowerBound,
            _ => return Err(Error::Parse(format!("unknown status `{s}`"))),
        })
    }
}

/// Rendered witness configuration `(a, b, c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub a: String,
    pub b: String,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceRow {
    pub n: usize,
    /// Largest resolved detour over pairs with `d(a, b) <= n`; `None` when
    /// the row is unbounded.
    pub value: Option<usize>,
    pub status: RowStatus,
    /// Configuration attaining the value; for unbounded rows, a
    /// disconnected one.
    pub witness: Option<Witness>,
    pub pairs_scanned: u64,
}

impl DivergenceRow {
    pub fn unbounded(&self) -> bool {
        self.status == RowStatus::Unbounded
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceReport {
    pub oracle: String,
    pub query: DivergenceQuery,
    pub rows: Vec<DivergenceRow>,
    /// Radius of the ball around the basepoint the search ran in.
    pub box_radius: usize,
    pub box_vertices: usize,
    pub runtime_secs: f64,
}

/// One CSV record, as written and parsed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivergenceCsvRow {
    pub n: usize,
    pub div_value: Option<usize>,
    pub unbounded_flag: bool,
    pub witness_a: String,
    pub witness_b: String,
    pub witness_c: String,
    pub pairs_scanned: u64,
    pub status: String,
}

pub const CSV_COLUMNS: [&str; 8] =
    ["n", "div_value", "unbounded_flag", "witness_a", "witness_b", "witness_c", "pairs_scanned", "status"];

impl DivergenceReport {
    pub fn csv_rows(&self) -> Vec<DivergenceCsvRow> {
        self.rows
            .iter()
            .map(|r| {
                let w = r.witness.clone().unwrap_or(Witness { a: String::new(), b: String::new(), c: String::new() });
                DivergenceCsvRow {
                    n: r.n,
                    div_value: r.value,
                    unbounded_flag: r.unbounded(),
                    witness_a: w.a,
                    witness_b: w.b,
                    witness_c: w.c,
                    pairs_scanned: r.pairs_scanned,
                    status: r.status.to_string(),
                }
            })
            .collect()
    }

    /// Columns `n,div_value,unbounded_flag,witness_a,witness_b,witness_c,
    /// pairs_scanned,status`. An unbounded row has an empty `div_value`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record(CSV_COLUMNS).expect("in-memory csv");
        }
        for row in self.csv_rows() {
            w.serialize(row).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
    }

    /// Largest `value / n` over bounded rows.
    pub fn max_ratio(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.value.map(|v| v as f64 / r.n as f64)).reduce(f64::max)
    }
}

pub fn parse_divergence_csv(text: &str) -> Result<Vec<DivergenceCsvRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers().map_err(|e| Error::Parse(e.to_string()))?;
    if headers.iter().ne(CSV_COLUMNS) {
        return Err(Error::Parse(format!("expected columns {}", CSV_COLUMNS.join(","))));
    }
    r.deserialize::<DivergenceCsvRow>()
        .map(|row| {
            let row = row.map_err(|e| Error::Parse(e.to_string()))?;
            let status: RowStatus = row.status.parse()?;
            if row.unbounded_flag != (status == RowStatus::Unbounded) {
                return Err(Error::Parse(format!("row {}: unbounded flag disagrees with status", row.n)));
            }
            if row.unbounded_flag && row.div_value.is_some() {
                return Err(Error::Parse(format!("row {}: unbounded row carries a value", row.n)));
            }
            Ok(row)
        })
        .collect()
}
