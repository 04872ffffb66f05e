//! The divergence function of a Cayley graph.
//!
//! For vertices `a, b, c` let `r = min(d(c, a), d(c, b))` and
//! `rho = delta * r - lambda`. The detour of `(a, b)` around `c` is the length
//! of a shortest path from `a` to `b` through vertices `v` with
//! `d(v, c) > rho`, or infinity if there is none. `Div_lambda(n; delta)` is
//! the largest detour over all `c` and all pairs with `d(a, b) <= n`.
//!
//! Distances are graph distances between vertices. Forbidden radii are exact
//! rationals, so `d(v, c) > rho` is the same as `d(v, c) > floor(rho)`.

mod ball;
mod engine;
mod report;

use std::collections::VecDeque;
use std::fmt::Debug;
use std::hash::Hash;

use indexmap::IndexMap;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use rustc_hash::{FxBuildHasher, FxHashSet};

pub use ball::{bfs_ball, Ball};
pub use engine::divergence_function;
pub use report::{parse_divergence_csv, DivergenceCsvRow, DivergenceReport, DivergenceRow, RowStatus, Witness};

use crate::error::{Error, Result};

/// Default cap on the number of vertices held in one ball.
pub const DEFAULT_MEMORY_BUDGET: usize = 24_000_000;

/// Deterministic neighbor oracle for a connected, locally finite,
/// undirected graph (in practice a Cayley graph).
pub trait GraphOracle: Sync {
    type Vertex: Clone + Eq + Hash + Send + Sync + Debug;

    fn name(&self) -> String;

    fn basepoint(&self) -> Self::Vertex;

    /// Appends the neighbors of `v` to `out` in a fixed order. Adjacency
    /// must be symmetric.
    fn neighbors(&self, v: &Self::Vertex, out: &mut Vec<Self::Vertex>) -> Result<()>;

    /// Injective byte encoding.
    fn canonical_key(&self, v: &Self::Vertex) -> Vec<u8>;

    fn render(&self, v: &Self::Vertex) -> String;

    /// Inverse of [`GraphOracle::render`].
    fn parse_vertex(&self, s: &str) -> Result<Self::Vertex>;

    /// Whether graph automorphisms act transitively on vertices.
    fn vertex_transitive(&self) -> bool;

    /// Whether the graph is a tree. Removing a ball from a tree disconnects
    /// every pair whose geodesic meets it, which certifies `Disconnected`.
    fn is_tree(&self) -> bool {
        false
    }

    /// Images of `v` under a fixed list of graph automorphisms fixing the
    /// basepoint. The list must be the same, in the same order, for every
    /// vertex. Empty means no symmetry reduction.
    fn basepoint_symmetries(&self, _v: &Self::Vertex) -> Vec<Self::Vertex> {
        Vec::new()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    /// Seeded uniform sample of `pairs` configurations; values are lower
    /// bounds.
    Sampled { pairs: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceQuery {
    pub n: usize,
    pub delta: Rational64,
    pub lambda: Rational64,
    pub horizon_factor: Rational64,
    pub mode: Mode,
}

impl DivergenceQuery {
    /// Exhaustive query with horizon factor 8.
    pub fn new(n: usize, delta: Rational64, lambda: Rational64) -> Result<Self> {
        let q = DivergenceQuery { n, delta, lambda, horizon_factor: Rational64::from_integer(8), mode: Mode::Exhaustive };
        q.validate()?;
        Ok(q)
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_horizon_factor(mut self, factor: Rational64) -> Self {
        self.horizon_factor = factor;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidQuery("n must be at least 1".into()));
        }
        if self.delta <= Rational64::zero() || self.delta >= Rational64::from_integer(1) {
            return Err(Error::InvalidQuery(format!("delta must lie in (0,1), got {}", self.delta)));
        }
        if self.lambda.is_negative() {
            return Err(Error::InvalidQuery(format!("lambda must be >= 0, got {}", self.lambda)));
        }
        if self.horizon_factor < Rational64::from_integer(1) {
            return Err(Error::InvalidQuery(format!("horizon factor must be >= 1, got {}", self.horizon_factor)));
        }
        if let Mode::Sampled { pairs: 0, .. } = self.mode {
            return Err(Error::InvalidQuery("sample size must be positive".into()));
        }
        Ok(())
    }

    /// `floor(horizon_factor * n)`.
    pub fn horizon(&self) -> usize {
        (self.horizon_factor * Rational64::from_integer(self.n as i64)).floor().to_integer() as usize
    }

    /// `delta * r - lambda`.
    pub fn forbidden_radius(&self, r: usize) -> Rational64 {
        self.delta * Rational64::from_integer(r as i64) - self.lambda
    }

    /// Largest `r = min(d(c,a), d(c,b))` for which a pair at distance `d`
    /// can have every geodesic meet the forbidden ball:
    /// `floor((d/2 - lambda) / (1 - delta))`, or `None` if there is none.
    pub fn max_hard_radius(&self, d: usize) -> Option<usize> {
        let num = Rational64::new(d as i64, 2) - self.lambda;
        if num.is_negative() {
            return None;
        }
        Some((num / (Rational64::from_integer(1) - self.delta)).floor().to_integer() as usize)
    }
}

/// Largest integer distance inside the closed ball of rational radius `rho`,
/// or `None` if the ball is empty.
pub(crate) fn forbidden_depth(rho: Rational64) -> Option<usize> {
    if rho.is_negative() {
        None
    } else {
        Some(rho.floor().to_integer() as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DetourStatus<V> {
    /// A shortest admissible path, both endpoints included.
    Path { length: usize, path: Vec<V> },
    Disconnected,
    HorizonExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetourResult<V> {
    pub status: DetourStatus<V>,
    pub forbidden_radius: Rational64,
}

/// Shortest path from `a` to `b` avoiding `{v : d(v, c) <= forbidden_radius}`,
/// searched up to length `horizon`.
pub fn detour_distance<O: GraphOracle + ?Sized>(
    oracle: &O,
    a: &O::Vertex,
    b: &O::Vertex,
    c: &O::Vertex,
    forbidden_radius: Rational64,
    horizon: usize,
    budget: usize,
) -> Result<DetourResult<O::Vertex>> {
    let forbidden: FxHashSet<O::Vertex> = match forbidden_depth(forbidden_radius) {
        Some(k) => bfs_ball(oracle, c, k, budget)?.vertices().cloned().collect(),
        None => FxHashSet::default(),
    };
    if forbidden.contains(a) || forbidden.contains(b) {
        return Err(Error::InvalidQuery("endpoints must lie outside the forbidden ball".into()));
    }
    let done = |status| Ok(DetourResult { status, forbidden_radius });

    if oracle.is_tree() {
        // The unique geodesic either avoids the ball or every path meets it.
        return match shortest_path(oracle, a, b, horizon, budget, |_| true)? {
            Search::Found(path) if path.iter().all(|v| !forbidden.contains(v)) => {
                done(DetourStatus::Path { length: path.len() - 1, path })
            }
            Search::Found(_) => done(DetourStatus::Disconnected),
            _ => Err(Error::InvalidQuery(format!("horizon {horizon} is below d(a, b)"))),
        };
    }
    match shortest_path(oracle, a, b, horizon, budget, |v| !forbidden.contains(v))? {
        Search::Found(path) => done(DetourStatus::Path { length: path.len() - 1, path }),
        Search::Exhausted => done(DetourStatus::Disconnected),
        Search::Horizon => done(DetourStatus::HorizonExceeded),
    }
}

enum Search<V> {
    Found(Vec<V>),
    Exhausted,
    Horizon,
}

fn shortest_path<O: GraphOracle + ?Sized>(
    oracle: &O,
    a: &O::Vertex,
    b: &O::Vertex,
    horizon: usize,
    budget: usize,
    allowed: impl Fn(&O::Vertex) -> bool,
) -> Result<Search<O::Vertex>> {
    // vertex -> (parent id, depth)
    let mut seen: IndexMap<O::Vertex, (usize, usize), FxBuildHasher> = IndexMap::with_hasher(FxBuildHasher);
    seen.insert(a.clone(), (usize::MAX, 0));
    let mut queue = VecDeque::from([0usize]);
    let mut out = Vec::new();
    let mut truncated = false;
    while let Some(i) = queue.pop_front() {
        let (v, &(_, depth)) = seen.get_index(i).expect("queued ids exist");
        if v == b {
            let mut path = Vec::with_capacity(depth + 1);
            let mut j = i;
            while j != usize::MAX {
                let (v, &(parent, _)) = seen.get_index(j).expect("parents exist");
                path.push(v.clone());
                j = parent;
            }
            path.reverse();
            return Ok(Search::Found(path));
        }
        if depth == horizon {
            truncated = true;
            continue;
        }
        out.clear();
        oracle.neighbors(v, &mut out)?;
        for w in out.drain(..) {
            if !allowed(&w) || seen.contains_key(&w) {
                continue;
            }
            if seen.len() >= budget {
                return Err(Error::MemoryBudget { budget, radius: depth });
            }
            let (id, _) = seen.insert_full(w, (i, depth + 1));
            queue.push_back(id);
        }
    }
    Ok(if truncated { Search::Horizon } else { Search::Exhausted })
}

/// Graph distance, searched up to `limit`.
pub fn distance<O: GraphOracle + ?Sized>(
    oracle: &O,
    a: &O::Vertex,
    b: &O::Vertex,
    limit: usize,
    budget: usize,
) -> Result<Option<usize>> {
    Ok(match shortest_path(oracle, a, b, limit, budget, |_| true)? {
        Search::Found(p) => Some(p.len() - 1),
        _ => None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairDivergence<V> {
    /// `None` when some center disconnects the pair.
    pub value: Option<usize>,
    /// Center attaining the value (or disconnecting the pair).
    pub center: Option<V>,
    /// Some center hit the horizon; `value` is then a lower bound.
    pub horizon_exceeded: bool,
    pub centers_scanned: usize,
}

/// Largest detour of `(a, b)` over centers `c`.
///
/// Without explicit centers the oracle must be vertex-transitive and every
/// `c` with `min(d(c,a), d(c,b))` small enough to matter is enumerated
/// around `a`; all farther centers leave a geodesic untouched.
pub fn pair_divergence<O: GraphOracle + ?Sized>(
    oracle: &O,
    a: &O::Vertex,
    b: &O::Vertex,
    query: &DivergenceQuery,
    centers: Option<&[O::Vertex]>,
    budget: usize,
) -> Result<PairDivergence<O::Vertex>> {
    query.validate()?;
    let horizon = query.horizon();
    let d = distance(oracle, a, b, query.n, budget)?
        .ok_or_else(|| Error::InvalidQuery(format!("d(a, b) exceeds n = {}", query.n)))?;
    // (c, d(c, a), lower bound for d(c, b))
    let candidates: Vec<(O::Vertex, usize, usize)> = match centers {
        Some(cs) => cs
            .iter()
            .map(|c| {
                let da = distance(oracle, c, a, usize::MAX, budget)?.expect("connected graph");
                let db = distance(oracle, c, b, usize::MAX, budget)?.expect("connected graph");
                Ok((c.clone(), da, db))
            })
            .collect::<Result<_>>()?,
        None if !oracle.vertex_transitive() => return Err(Error::NonTransitiveUnsupported),
        None => {
            // Beyond radius r_max + d + 1 from a, both endpoints are farther
            // than r_max from c.
            let r = query.max_hard_radius(d).map_or(0, |r| r + d + 1);
            let around_a = bfs_ball(oracle, a, r, budget)?;
            let around_b = bfs_ball(oracle, b, r, budget)?;
            around_a
                .vertices()
                .map(|c| (c.clone(), around_a.distance(c).expect("member"), around_b.distance(c).unwrap_or(r + 1)))
                .collect()
        }
    };

    let mut best = PairDivergence { value: Some(0), center: None, horizon_exceeded: false, centers_scanned: 0 };
    for (c, da, db) in candidates {
        let rho = query.forbidden_radius(da.min(db));
        let k = forbidden_depth(rho);
        if k.is_some_and(|k| da.min(db) <= k) {
            continue;
        }
        best.centers_scanned += 1;
        // A geodesic meeting the ball has length >= d(a,c) + d(c,b) - 2k.
        let trivial = k.is_none_or(|k| d + 2 * k < da + db);
        let len = if trivial {
            d
        } else {
            match detour_distance(oracle, a, b, &c, rho, horizon, budget)?.status {
                DetourStatus::Path { length, .. } => length,
                DetourStatus::Disconnected => {
                    return Ok(PairDivergence { value: None, center: Some(c), ..best });
                }
                DetourStatus::HorizonExceeded => {
                    best.horizon_exceeded = true;
                    continue;
                }
            }
        };
        if best.center.is_none() || best.value.is_some_and(|v| len > v) {
            best.value = Some(len);
            best.center = Some(c);
        }
    }
    Ok(best)
}
