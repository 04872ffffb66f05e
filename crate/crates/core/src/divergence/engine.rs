//! Fixed-center evaluation of `Div_lambda(n; delta)` on a vertex-transitive
//! graph.
//!
//! The center is the basepoint `c`. Since detours are symmetric in `a, b`,
//! configurations are ordered pairs with `|a| <= |b|` (both orders kept
//! when `|a| = |b|`), where `|v| = d(c, v)`. With `k = floor(delta |a| - lambda)`
//! a geodesic can only meet the forbidden ball `|v| <= k` if
//! `d(a, b) >= |a| + |b| - 2k`; all other pairs have detour `d(a, b)`. That
//! inequality forces `|a| <= r_max = floor((n/2 - lambda) / (1 - delta))`, so
//! sources range over `|a| <= max(r_max, 1)` and everything happens inside
//! a ball `B(c, R)` with `R >= max(r_max, 1) + n`.
//!
//! Detours of the remaining ("hard") pairs come from a bit-parallel BFS that
//! runs up to 64 sources with the same forbidden ball at once. A detour `D`
//! found inside the ball is exact once no path leaving the ball can be
//! shorter: such a path first reaches the outer sphere at some level
//! `L >= first boundary level` and then needs `R + 1 - |b|` more steps back.
//! Uncertified pairs trigger growth of the ball.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::divergence::ball::Ball;
use crate::divergence::report::{DivergenceReport, DivergenceRow, RowStatus, Witness};
use crate::divergence::{forbidden_depth, DivergenceQuery, GraphOracle, Mode};
use crate::error::{Error, Result};

/// Source vertex with its forbidden depth and the targets it is paired with.
struct Job {
    a: u32,
    k: Option<u32>,
    /// `(b, d(a, b))` in BFS order.
    pairs: Vec<(u32, u32)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verdict {
    Exact(u32),
    Disconnected,
    Horizon,
    Uncertified,
}

struct Hard {
    job: usize,
    b: u32,
    d: u32,
    verdict: Verdict,
}

pub fn divergence_function<O: GraphOracle + ?Sized>(
    oracle: &O,
    query: &DivergenceQuery,
    budget: usize,
) -> Result<DivergenceReport> {
    query.validate()?;
    if !oracle.vertex_transitive() {
        return Err(Error::NonTransitiveUnsupported);
    }
    let start = Instant::now();
    let n = query.n;
    let horizon = u32::try_from(query.horizon()).map_err(|_| Error::InvalidQuery("horizon too large".into()))?;
    let r_src = query.max_hard_radius(n).unwrap_or(0).max(1);

    let mut ball = Ball::new(oracle.basepoint(), true);
    ball.grow(oracle, r_src + n, budget)?;

    let sources = canonical_sources(oracle, &ball, query, r_src)?;
    let mut jobs: Vec<Job> = sources
        .par_iter()
        .map(|&(a, k)| Job { a, k, pairs: targets(&ball, a, n as u32) })
        .collect();
    if let Mode::Sampled { pairs, seed } = query.mode {
        sample(&mut jobs, pairs, seed);
    }

    let mut hard: Vec<Hard> = Vec::new();
    for (j, job) in jobs.iter().enumerate() {
        for &(b, d) in &job.pairs {
            if is_hard(&ball, job, b, d) {
                hard.push(Hard { job: j, b, d, verdict: Verdict::Uncertified });
            }
        }
    }

    let tree = oracle.is_tree();
    let mut first = true;
    loop {
        let open: Vec<usize> = (0..hard.len()).filter(|&i| hard[i].verdict == Verdict::Uncertified).collect();
        if open.is_empty() {
            break;
        }
        if !first {
            // beyond this radius every out-of-ball path exceeds the horizon
            if ball.radius() > r_src + 2 * n + horizon as usize {
                return Err(Error::Invariant("detours still uncertified past the horizon radius".into()));
            }
            let radius = ball.radius() + 1;
            ball.grow(oracle, radius, budget)?;
        }
        first = false;
        for (i, v) in resolve(&ball, &jobs, &hard, &open, horizon, tree) {
            hard[i].verdict = v;
        }
    }

    let rows = aggregate(oracle, &ball, query, &jobs, &hard);
    Ok(DivergenceReport {
        oracle: oracle.name(),
        query: query.clone(),
        rows,
        box_radius: ball.radius(),
        box_vertices: ball.len(),
        runtime_secs: start.elapsed().as_secs_f64(),
    })
}

/// Sources `|a| <= r_src` outside their own forbidden ball, keeping one
/// representative (least id) per orbit of the basepoint symmetries.
fn canonical_sources<O: GraphOracle + ?Sized>(
    oracle: &O,
    ball: &Ball<O::Vertex>,
    query: &DivergenceQuery,
    r_src: usize,
) -> Result<Vec<(u32, Option<u32>)>> {
    let ids: Vec<u32> = (0..ball.sphere(r_src).end as u32).collect();
    let keep: Vec<Option<(u32, Option<u32>)>> = ids
        .par_iter()
        .map(|&a| {
            let r = ball.dist_of(a);
            let k = forbidden_depth(query.forbidden_radius(r as usize)).map(|k| k as u32);
            if k.is_some_and(|k| r <= k) {
                return Ok(None);
            }
            for image in oracle.basepoint_symmetries(ball.vertex(a)) {
                let id = ball.id(&image).ok_or_else(|| {
                    Error::Invariant(format!("symmetry image {image:?} of {:?} left the ball", ball.vertex(a)))
                })?;
                if id < a {
                    return Ok(None);
                }
            }
            Ok(Some((a, k)))
        })
        .collect::<Result<_>>()?;
    Ok(keep.into_iter().flatten().collect())
}

/// `(b, d(a, b))` for `b != a`, `|b| >= |a|`, `d(a, b) <= n`. Distances are
/// exact inside the ball because geodesics between such vertices stay
/// within radius `|a| + n`.
fn targets<V: Clone + Eq + std::hash::Hash + Send + Sync>(ball: &Ball<V>, a: u32, n: u32) -> Vec<(u32, u32)> {
    let ra = ball.dist_of(a);
    let mut seen: FxHashMap<u32, u32> = FxHashMap::default();
    seen.insert(a, 0);
    let mut frontier = vec![a];
    let mut out = Vec::new();
    for level in 1..=n {
        let mut next = Vec::new();
        for &v in &frontier {
            for &w in ball.neighbors_of(v) {
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(w) {
                    e.insert(level);
                    next.push(w);
                    if ball.dist_of(w) >= ra {
                        out.push((w, level));
                    }
                }
            }
        }
        frontier = next;
    }
    out
}

fn is_hard<V: Clone + Eq + std::hash::Hash + Send + Sync>(ball: &Ball<V>, job: &Job, b: u32, d: u32) -> bool {
    match job.k {
        None => false,
        Some(k) => d + 2 * k >= ball.dist_of(job.a) + ball.dist_of(b),
    }
}

/// Keeps a seeded uniform sample (with repetition collapsed) of the pairs.
fn sample(jobs: &mut [Job], count: usize, seed: u64) {
    let total: usize = jobs.iter().map(|j| j.pairs.len()).sum();
    if total == 0 {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<usize> = (0..count).map(|_| rng.gen_range(0..total)).collect();
    picked.sort_unstable();
    picked.dedup();
    let mut offset = 0;
    let mut it = picked.into_iter().peekable();
    for job in jobs.iter_mut() {
        let len = job.pairs.len();
        let mut kept = Vec::new();
        while let Some(&p) = it.peek() {
            if p >= offset + len {
                break;
            }
            kept.push(job.pairs[p - offset]);
            it.next();
        }
        offset += len;
        job.pairs = kept;
    }
}

/// Runs the bit-parallel search for the listed hard pairs.
fn resolve<V: Clone + Eq + std::hash::Hash + Send + Sync>(
    ball: &Ball<V>,
    jobs: &[Job],
    hard: &[Hard],
    open: &[usize],
    horizon: u32,
    tree: bool,
) -> Vec<(usize, Verdict)> {
    // group by forbidden depth, then by source, preserving order
    let mut by_k: BTreeMap<u32, Vec<(usize, Vec<usize>)>> = BTreeMap::new();
    for &i in open {
        let job = &jobs[hard[i].job];
        let group = by_k.entry(job.k.expect("hard pairs have a forbidden ball")).or_default();
        match group.last_mut() {
            Some((j, list)) if *j == hard[i].job => list.push(i),
            _ => group.push((hard[i].job, vec![i])),
        }
    }
    let batches: Vec<(u32, &[(usize, Vec<usize>)])> =
        by_k.iter().flat_map(|(&k, group)| group.chunks(64).map(move |c| (k, c))).collect();
    // Each worker holds 16 bytes per ball vertex; cap the total.
    let lanes = rayon::current_num_threads().min((SCRATCH_BYTES / (16 * ball.len().max(1))).max(1)).max(1);
    let mut out: Vec<(usize, Verdict)> = (0..lanes)
        .into_par_iter()
        .flat_map_iter(|lane| {
            let mut scratch = Scratch::new(ball.len());
            batches
                .iter()
                .skip(lane)
                .step_by(lanes)
                .flat_map(|&(k, batch)| scratch.run(ball, jobs, hard, k, batch, horizon, tree))
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort_unstable_by_key(|&(i, _)| i);
    out
}

const SCRATCH_BYTES: usize = 1 << 30;

/// Per-worker search state: the sources that reached each vertex, and the
/// sources reaching it for the first time at the current level. Frontiers
/// are lists of `(vertex, source bits)` with distinct vertices.
struct Scratch {
    visited: Vec<u64>,
    next: Vec<u64>,
    touched: Vec<u32>,
}

impl Scratch {
    fn new(len: usize) -> Self {
        Scratch { visited: vec![0; len], next: vec![0; len], touched: Vec::new() }
    }

    #[allow(clippy::too_many_arguments)]
    fn run<V: Clone + Eq + std::hash::Hash + Send + Sync>(
        &mut self,
        ball: &Ball<V>,
        jobs: &[Job],
        hard: &[Hard],
        k: u32,
        batch: &[(usize, Vec<usize>)],
        horizon: u32,
        tree: bool,
    ) -> Vec<(usize, Verdict)> {
        let dist = ball.dists();
        let edge = ball.radius() as u32;
        let mut targets: FxHashMap<u32, u64> = FxHashMap::default();
        let mut remaining = 0usize;
        let mut active: Vec<(u32, u64)> = Vec::with_capacity(batch.len());
        for (slot, (j, list)) in batch.iter().enumerate() {
            let bit = 1u64 << slot;
            let a = jobs[*j].a;
            self.visited[a as usize] |= bit;
            self.touched.push(a);
            active.push((a, bit));
            for &i in list {
                *targets.entry(hard[i].b).or_default() |= bit;
                remaining += 1;
            }
        }

        let mut found: FxHashMap<(u32, u8), u32> = FxHashMap::default();
        let mut first_edge = [u32::MAX; 64];
        let mut reached: Vec<u32> = Vec::new();
        let mut next_active: Vec<(u32, u64)> = Vec::new();
        let mut level = 0u32;
        while remaining > 0 && !active.is_empty() && level < horizon {
            for &(v, m) in &active {
                for &u in ball.neighbors_of(v) {
                    if dist[u as usize] <= k {
                        continue;
                    }
                    let seen = self.visited[u as usize];
                    let fresh = m & !seen;
                    if fresh != 0 {
                        if seen == 0 {
                            self.touched.push(u);
                        }
                        if self.next[u as usize] == 0 {
                            reached.push(u);
                        }
                        self.visited[u as usize] = seen | fresh;
                        self.next[u as usize] |= fresh;
                    }
                }
            }
            level += 1;
            next_active.clear();
            next_active.extend(reached.drain(..).map(|u| (u, std::mem::take(&mut self.next[u as usize]))));
            for &(u, bits) in &next_active {
                if dist[u as usize] == edge {
                    let mut fresh = bits;
                    while fresh != 0 {
                        let s = fresh.trailing_zeros() as usize;
                        first_edge[s] = first_edge[s].min(level);
                        fresh &= fresh - 1;
                    }
                }
                if let Some(&t) = targets.get(&u) {
                    let mut hits = bits & t;
                    while hits != 0 {
                        let s = hits.trailing_zeros();
                        found.insert((u, s as u8), level);
                        remaining -= 1;
                        hits &= hits - 1;
                    }
                }
            }
            std::mem::swap(&mut active, &mut next_active);
        }
        let exhausted = active.is_empty();
        for &v in &self.touched {
            self.visited[v as usize] = 0;
        }
        self.touched.clear();

        let mut out = Vec::new();
        for (slot, (_, list)) in batch.iter().enumerate() {
            // lower bound on the level at which this search first reached
            // the outer sphere
            let reach = match first_edge[slot] {
                u32::MAX if exhausted => None,
                u32::MAX => Some(level + 1),
                l => Some(l),
            };
            for &i in list {
                let back = edge + 2 - dist[hard[i].b as usize];
                let out_bound = reach.map(|l| l + back);
                let verdict = match found.get(&(hard[i].b, slot as u8)) {
                    Some(&d) if out_bound.is_none_or(|o| d <= o) => Verdict::Exact(d),
                    Some(_) => Verdict::Uncertified,
                    None if out_bound.is_none() || tree => Verdict::Disconnected,
                    None if out_bound.is_some_and(|o| o > horizon) => Verdict::Horizon,
                    None => Verdict::Uncertified,
                };
                out.push((i, verdict));
            }
        }
        out
    }
}

#[derive(Clone, Default)]
struct Bucket {
    count: u64,
    /// `(detour, a, b)`: largest detour, ties to the least ids.
    best: Option<(u32, u32, u32)>,
    disconnected: Option<(u32, u32)>,
    horizon: bool,
}

impl Bucket {
    fn offer(&mut self, detour: u32, a: u32, b: u32) {
        let better = match self.best {
            None => true,
            Some((d, x, y)) => detour > d || (detour == d && (a, b) < (x, y)),
        };
        if better {
            self.best = Some((detour, a, b));
        }
    }

    fn merge(&mut self, other: &Bucket) {
        self.count += other.count;
        if let Some((d, a, b)) = other.best {
            self.offer(d, a, b);
        }
        self.disconnected = match (self.disconnected, other.disconnected) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        self.horizon |= other.horizon;
    }
}

fn aggregate<O: GraphOracle + ?Sized>(
    oracle: &O,
    ball: &Ball<O::Vertex>,
    query: &DivergenceQuery,
    jobs: &[Job],
    hard: &[Hard],
) -> Vec<DivergenceRow> {
    let n = query.n;
    let mut buckets = vec![Bucket::default(); n + 1];
    for job in jobs {
        for &(b, d) in &job.pairs {
            buckets[d as usize].count += 1;
            if !is_hard(ball, job, b, d) {
                buckets[d as usize].offer(d, job.a, b);
            }
        }
    }
    for h in hard {
        let a = jobs[h.job].a;
        let bucket = &mut buckets[h.d as usize];
        match h.verdict {
            Verdict::Exact(len) => bucket.offer(len, a, h.b),
            Verdict::Disconnected => {
                bucket.disconnected = Some(bucket.disconnected.map_or((a, h.b), |w| w.min((a, h.b))));
            }
            Verdict::Horizon => bucket.horizon = true,
            Verdict::Uncertified => unreachable!("all pairs are certified before aggregation"),
        }
    }

    let c = oracle.render(ball.center());
    let witness = |a: u32, b: u32| Witness {
        a: oracle.render(ball.vertex(a)),
        b: oracle.render(ball.vertex(b)),
        c: c.clone(),
    };
    let sampled = matches!(query.mode, Mode::Sampled { .. });
    let mut acc = Bucket::default();
    let mut rows = Vec::with_capacity(n);
    for (m, bucket) in buckets.iter().enumerate().skip(1) {
        acc.merge(bucket);
        let row = if let Some((a, b)) = acc.disconnected {
            DivergenceRow {
                n: m,
                value: None,
                status: RowStatus::Unbounded,
                witness: Some(witness(a, b)),
                pairs_scanned: acc.count,
            }
        } else {
            let status = if acc.horizon {
                RowStatus::HorizonExceeded
            } else if sampled {
                RowStatus::LowerBound
            } else {
                RowStatus::Exact
            };
            DivergenceRow {
                n: m,
                value: acc.best.map(|(d, _, _)| d as usize),
                status,
                witness: acc.best.map(|(_, a, b)| witness(a, b)),
                pairs_scanned: acc.count,
            }
        };
        rows.push(row);
    }
    rows
}
