//! Exhaustive scans over balls of chambers: pencils of parallel separating
//! walls, and shielding of chambers from a wall by a parallel wall.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coxeter::{parse_word, CoxeterSystem, Element};
use crate::error::{Error, Result};
use crate::walls::clique::{max_clique, parallel_adjacency, CLIQUE_BOUND};
use crate::walls::{descend, make_positive, roots_parallel, separating_roots, Wall};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilRow {
    pub n: usize,
    /// Minimum over chambers at distance `n` of the largest pairwise-parallel
    /// family among the walls separating them from the identity.
    pub min_parallel: usize,
    /// ShortLex-first chamber attaining the minimum.
    pub witness: Element,
    pub scanned: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilReport {
    pub system: String,
    pub radius: usize,
    pub rows: Vec<PencilRow>,
    /// Smallest `C >= 1` with `min_parallel(n) >= floor(n / C)` for every row.
    pub c_hat: usize,
}

fn require_infinite(system: &CoxeterSystem) -> Result<()> {
    if system.is_finite() {
        Err(Error::SphericalSystem)
    } else {
        Ok(())
    }
}

pub fn lemma1_scan(system: &CoxeterSystem, radius: usize) -> Result<PencilReport> {
    require_infinite(system)?;
    if radius == 0 {
        return Err(Error::InvalidQuery("pencil scan radius must be at least 1".into()));
    }
    if radius > CLIQUE_BOUND {
        return Err(Error::TooLarge { len: radius, bound: CLIQUE_BOUND });
    }
    let elements = system.elements_up_to(radius);
    let e = Element::identity();
    let sizes: Vec<usize> = elements[1..]
        .par_iter()
        .map(|w| {
            let roots = separating_roots(system, &e, w);
            parallel_adjacency(system, &roots).map(|adj| max_clique(&adj).len())
        })
        .collect::<Result<_>>()?;

    let mut rows: Vec<PencilRow> = Vec::with_capacity(radius);
    for (w, &size) in elements[1..].iter().zip(&sizes) {
        let n = w.length();
        match rows.last_mut() {
            Some(row) if row.n == n => {
                row.scanned += 1;
                if size < row.min_parallel {
                    row.min_parallel = size;
                    row.witness = w.clone();
                }
            }
            _ => rows.push(PencilRow { n, min_parallel: size, witness: w.clone(), scanned: 1 }),
        }
    }
    if rows.len() != radius {
        return Err(Error::Invariant(format!("ball of radius {radius} has only {} spheres", rows.len())));
    }
    let c_hat = (1..)
        .find(|&c| rows.iter().all(|r| r.min_parallel >= r.n / c))
        .expect("c = radius + 1 always works");
    Ok(PencilReport { system: system.name().to_string(), radius, rows, c_hat })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct PencilCsvRow {
    n: usize,
    min_parallel: usize,
    witness_word: String,
}

impl PencilReport {
    /// Columns `n,min_parallel,witness_word`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(PencilCsvRow { n: r.n, min_parallel: r.min_parallel, witness_word: r.witness.to_string() })
                .expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
    }
}

/// Parses pencil CSV back into `(n, min_parallel, witness word)`.
pub fn parse_pencil_csv(text: &str) -> Result<Vec<(usize, usize, Vec<u8>)>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    check_headers(&mut r, &["n", "min_parallel", "witness_word"])?;
    r.deserialize::<PencilCsvRow>()
        .map(|row| {
            let row = row.map_err(|e| Error::Parse(e.to_string()))?;
            Ok((row.n, row.min_parallel, parse_word(&row.witness_word)?))
        })
        .collect()
}

fn check_headers<R: std::io::Read>(r: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let h = r.headers().map_err(|e| Error::Parse(e.to_string()))?;
    if h.iter().ne(expected.iter().copied()) {
        return Err(Error::Parse(format!("expected columns {}, got {}", expected.join(","), h.iter().collect::<Vec<_>>().join(","))));
    }
    Ok(())
}

/// A scanned chamber in a shielding scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chamber {
    pub element: Element,
    /// Gallery distance to the nearest chamber with a panel on the wall.
    pub wall_distance: usize,
    /// First wall (in gallery order from the wall's base chamber) that
    /// separates the chamber from the wall and is parallel to it.
    pub shield: Option<Wall>,
}

#[derive(Clone, Debug)]
pub struct PwtRow {
    pub wall: Wall,
    pub wall_id: String,
    /// Least `D` such that every scanned chamber at wall-distance `>= D` is
    /// shielded, and at least one such chamber was scanned.
    pub cpp_hat: Option<usize>,
    pub n_scanned: usize,
    pub chambers: Vec<Chamber>,
}

#[derive(Clone, Debug)]
pub struct PwtReport {
    pub system: String,
    pub radius: usize,
    pub rows: Vec<PwtRow>,
}

/// Shielding scan for the walls of the simple reflections.
pub fn pwt_scan(system: &CoxeterSystem, radius: usize) -> Result<PwtReport> {
    let walls: Vec<Wall> = (0..system.rank() as u8).map(|s| Wall::simple(system, s)).collect();
    pwt_scan_walls(system, radius, &walls)
}

/// Walls crossed by some gallery of length `<= radius` from the identity,
/// in order of first appearance along ShortLex normal forms.
pub fn walls_up_to(system: &CoxeterSystem, radius: usize) -> Vec<Wall> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for w in system.elements_up_to(radius) {
        if let Some(&last) = w.word().last() {
            let prefix = system.normal_form(&w.word()[..w.length() - 1]);
            let root = make_positive(system.root_of(&prefix, last));
            if seen.insert(root.clone()) {
                out.push(Wall::from_root(system, &root).expect("roots of galleries are roots"));
            }
        }
    }
    out
}

pub fn pwt_scan_walls(system: &CoxeterSystem, radius: usize, walls: &[Wall]) -> Result<PwtReport> {
    require_infinite(system)?;
    if radius < 2 {
        return Err(Error::InvalidQuery("shielding scan radius must be at least 2".into()));
    }
    let ball = system.elements_up_to(radius);
    let rows = walls
        .iter()
        .map(|h| scan_wall(system, &ball, h))
        .collect::<Result<Vec<_>>>()?;
    Ok(PwtReport { system: system.name().to_string(), radius, rows })
}

fn scan_wall(system: &CoxeterSystem, ball: &[Element], wall: &Wall) -> Result<PwtRow> {
    let form = system.form();
    let beta = &wall.root().coords;
    let base = wall.base_chamber(system);
    let chambers: Vec<Chamber> = ball
        .par_iter()
        .map(|w| {
            let gamma = make_positive(system.act(&system.inverse(w), beta));
            let (path, _) = descend(form, &gamma)
                .ok_or_else(|| Error::Invariant(format!("w^-1 H is not a wall for w = {w}")))?;
            let shield = separating_roots(system, &base, w)
                .into_iter()
                .find(|r| r != beta && roots_parallel(form, r, beta))
                .map(|r| Wall::from_root(system, &r))
                .transpose()?;
            Ok(Chamber { element: w.clone(), wall_distance: path.len(), shield })
        })
        .collect::<Result<_>>()?;

    let max_d = chambers.iter().map(|c| c.wall_distance).max().unwrap_or(0);
    // Smallest distance beyond which every chamber is shielded.
    let last_bare = chambers.iter().filter(|c| c.shield.is_none()).map(|c| c.wall_distance).max();
    let cpp_hat = match last_bare {
        None => Some(0),
        Some(d) if d < max_d => Some(d + 1),
        Some(_) => None,
    };
    Ok(PwtRow {
        wall: wall.clone(),
        wall_id: wall.reflection().to_string(),
        cpp_hat,
        n_scanned: chambers.len(),
        chambers,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct PwtCsvRow {
    wall_id: String,
    #[serde(rename = "Cpp_hat")]
    cpp_hat: String,
    n_scanned: usize,
}

pub const NOT_FOUND: &str = "NOT_FOUND";

impl PwtReport {
    /// Columns `wall_id,Cpp_hat,n_scanned`; a missing constant is `NOT_FOUND`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(PwtCsvRow {
                wall_id: r.wall_id.clone(),
                cpp_hat: r.cpp_hat.map_or_else(|| NOT_FOUND.to_string(), |d| d.to_string()),
                n_scanned: r.n_scanned,
            })
            .expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
    }
}

/// Parses shielding CSV back into `(wall_id, Cpp_hat, n_scanned)`.
pub fn parse_pwt_csv(text: &str) -> Result<Vec<(String, Option<usize>, usize)>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    check_headers(&mut r, &["wall_id", "Cpp_hat", "n_scanned"])?;
    r.deserialize::<PwtCsvRow>()
        .map(|row| {
            let row = row.map_err(|e| Error::Parse(e.to_string()))?;
            parse_word(&row.wall_id)?;
            let cpp = if row.cpp_hat == NOT_FOUND {
                None
            } else {
                Some(row.cpp_hat.parse().map_err(|_| Error::Parse(format!("bad Cpp_hat `{}`", row.cpp_hat)))?)
            };
            Ok((row.wall_id, cpp, row.n_scanned))
        })
        .collect()
}
