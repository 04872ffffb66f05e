//! Breadth-first balls with interned vertices and optional CSR adjacency.

use std::hash::Hash;

use indexmap::IndexSet;
use rayon::prelude::*;
use rustc_hash::FxBuildHasher;

use crate::divergence::GraphOracle;
use crate::error::{Error, Result};

const CHUNK: usize = 1 << 14;

/// Exact ball `B(center, radius)`. Vertex ids are assigned in BFS order, so
/// ids `layer_start(r)..layer_start(r + 1)` form the sphere of radius `r`.
///
/// With adjacency enabled, every vertex keeps the ids of its neighbors in
/// oracle order; for the outermost sphere only neighbors inside the ball are
/// kept, which still contains every edge between ball vertices.
#[derive(Clone, Debug)]
pub struct Ball<V: Eq + Hash> {
    set: IndexSet<V, FxBuildHasher>,
    dist: Vec<u32>,
    layers: Vec<usize>,
    radius: usize,
    adjacency: Option<Csr>,
}

#[derive(Clone, Debug, Default)]
struct Csr {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

impl<V: Clone + Eq + Hash + Send + Sync> Ball<V> {
    pub(crate) fn new(center: V, with_adjacency: bool) -> Self {
        let mut set = IndexSet::with_hasher(FxBuildHasher);
        set.insert(center);
        Ball {
            set,
            dist: vec![0],
            layers: vec![0, 1],
            radius: 0,
            adjacency: with_adjacency.then(|| Csr { offsets: vec![0], targets: Vec::new() }),
        }
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn center(&self) -> &V {
        &self.set[0]
    }

    /// Vertices in BFS order.
    pub fn vertices(&self) -> impl Iterator<Item = &V> {
        self.set.iter()
    }

    pub fn distance(&self, v: &V) -> Option<usize> {
        self.set.get_index_of(v).map(|i| self.dist[i] as usize)
    }

    pub fn id(&self, v: &V) -> Option<u32> {
        self.set.get_index_of(v).map(|i| i as u32)
    }

    pub fn vertex(&self, id: u32) -> &V {
        &self.set[id as usize]
    }

    pub(crate) fn dist_of(&self, id: u32) -> u32 {
        self.dist[id as usize]
    }

    pub(crate) fn dists(&self) -> &[u32] {
        &self.dist
    }

    /// Ids of the vertices at distance exactly `r`.
    pub fn sphere(&self, r: usize) -> std::ops::Range<usize> {
        if r > self.radius {
            return 0..0;
        }
        self.layers[r]..self.layers[r + 1]
    }

    pub(crate) fn neighbors_of(&self, id: u32) -> &[u32] {
        let csr = self.adjacency.as_ref().expect("ball built without adjacency");
        &csr.targets[csr.offsets[id as usize] as usize..csr.offsets[id as usize + 1] as usize]
    }

    /// Extends the ball to `target` radius. Fails with `MemoryBudget` as soon
    /// as the vertex count would exceed `budget`, reporting the last radius
    /// that was completed.
    pub(crate) fn grow<O>(&mut self, oracle: &O, target: usize, budget: usize) -> Result<()>
    where
        O: GraphOracle<Vertex = V> + ?Sized,
    {
        if target <= self.radius && (self.adjacency.is_none() || self.closed()) {
            return Ok(());
        }
        while self.radius < target {
            let (start, end) = (self.layers[self.radius], self.set.len());
            if let Some(csr) = self.adjacency.as_mut() {
                csr.offsets.truncate(start + 1);
                csr.targets.truncate(csr.offsets[start] as usize);
            }
            let next = self.radius as u32 + 1;
            for lo in (start..end).step_by(CHUNK) {
                let lists = self.neighbor_lists(oracle, lo..end.min(lo + CHUNK))?;
                for list in lists {
                    for w in list {
                        let (id, fresh) = self.set.insert_full(w);
                        if fresh {
                            if self.set.len() > budget {
                                return Err(Error::MemoryBudget { budget, radius: self.radius });
                            }
                            self.dist.push(next);
                        }
                        if let Some(csr) = self.adjacency.as_mut() {
                            csr.targets.push(id as u32);
                        }
                    }
                    if let Some(csr) = self.adjacency.as_mut() {
                        csr.offsets.push(edge_offset(csr.targets.len())?);
                    }
                }
            }
            self.radius += 1;
            self.layers.push(self.set.len());
        }
        if self.adjacency.is_some() {
            self.close_boundary(oracle)?;
        }
        Ok(())
    }

    fn closed(&self) -> bool {
        self.adjacency.as_ref().is_some_and(|c| c.offsets.len() == self.set.len() + 1)
    }

    fn close_boundary<O>(&mut self, oracle: &O) -> Result<()>
    where
        O: GraphOracle<Vertex = V> + ?Sized,
    {
        let (start, end) = (self.layers[self.radius], self.set.len());
        for lo in (start..end).step_by(CHUNK) {
            let lists = self.neighbor_lists(oracle, lo..end.min(lo + CHUNK))?;
            let csr = self.adjacency.as_mut().expect("adjacency enabled");
            for list in lists {
                csr.targets.extend(list.iter().filter_map(|w| self.set.get_index_of(w).map(|i| i as u32)));
                csr.offsets.push(edge_offset(csr.targets.len())?);
            }
        }
        Ok(())
    }

    fn neighbor_lists<O>(&self, oracle: &O, ids: std::ops::Range<usize>) -> Result<Vec<Vec<V>>>
    where
        O: GraphOracle<Vertex = V> + ?Sized,
    {
        ids.into_par_iter()
            .map(|i| {
                let mut out = Vec::new();
                oracle.neighbors(&self.set[i], &mut out)?;
                Ok(out)
            })
            .collect()
    }
}

fn edge_offset(len: usize) -> Result<u32> {
    u32::try_from(len).map_err(|_| Error::Invariant("ball has more than 2^32 adjacency entries".into()))
}

/// The exact ball of radius `r` around `center`, with distances.
pub fn bfs_ball<O: GraphOracle + ?Sized>(
    oracle: &O,
    center: &O::Vertex,
    r: usize,
    budget: usize,
) -> Result<Ball<O::Vertex>> {
    if budget == 0 {
        return Err(Error::MemoryBudget { budget, radius: 0 });
    }
    let mut ball = Ball::new(center.clone(), false);
    ball.grow(oracle, r, budget)?;
    Ok(ball)
}
