//! Exact maximum clique on at most 64 vertices, used on parallelism graphs.

use crate::coxeter::CoxeterSystem;
use crate::error::{Error, Result};
use crate::walls::{roots_parallel, Wall};

pub const CLIQUE_BOUND: usize = 40;

/// Maximum clique of the graph with adjacency bitmasks `adj`. The witness is
/// sorted; among cliques of maximum size the search order makes it
/// deterministic.
pub fn max_clique(adj: &[u64]) -> Vec<usize> {
    let n = adj.len();
    assert!(n <= 64, "max_clique handles at most 64 vertices");
    if n == 0 {
        return Vec::new();
    }
    // Branch in order of decreasing degree.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].count_ones()), v));

    let mut best: Vec<usize> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    expand(adj, &order, all, &mut current, &mut best);
    best.sort_unstable();
    best
}

fn expand(adj: &[u64], order: &[usize], mut cand: u64, current: &mut Vec<usize>, best: &mut Vec<usize>) {
    if cand == 0 {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return;
    }
    for &v in order {
        if cand & (1 << v) == 0 {
            continue;
        }
        if current.len() + color_bound(adj, order, cand) <= best.len() {
            return;
        }
        current.push(v);
        expand(adj, order, cand & adj[v], current, best);
        current.pop();
        cand &= !(1 << v);
    }
}

/// Greedy colouring of the candidate set; the number of colours bounds
/// any clique inside it.
fn color_bound(adj: &[u64], order: &[usize], cand: u64) -> usize {
    let mut uncolored = cand;
    let mut colors = 0;
    while uncolored != 0 {
        colors += 1;
        let mut avail = uncolored;
        for &v in order {
            if avail & (1 << v) != 0 {
                uncolored &= !(1 << v);
                avail &= !(adj[v] | (1 << v));
            }
        }
    }
    colors
}

pub fn max_parallel_family(system: &CoxeterSystem, walls: &[Wall]) -> Result<(usize, Vec<usize>)> {
    max_parallel_family_with_bound(system, walls, CLIQUE_BOUND)
}

/// Largest pairwise-parallel subfamily, as indices into `walls`.
pub fn max_parallel_family_with_bound(
    system: &CoxeterSystem,
    walls: &[Wall],
    bound: usize,
) -> Result<(usize, Vec<usize>)> {
    let bound = bound.min(64);
    if walls.len() > bound {
        return Err(Error::TooLarge { len: walls.len(), bound });
    }
    let roots: Vec<_> = walls.iter().map(|w| w.root().coords.clone()).collect();
    let adj = parallel_adjacency(system, &roots)?;
    let best = max_clique(&adj);
    Ok((best.len(), best))
}

pub(crate) fn parallel_adjacency(
    system: &CoxeterSystem,
    roots: &[Vec<crate::scalar::QuadExtScalar>],
) -> Result<Vec<u64>> {
    let form = system.form();
    let mut adj = vec![0u64; roots.len()];
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if roots[i] == roots[j] {
                return Err(Error::SameWall);
            }
            if roots_parallel(form, &roots[i], &roots[j]) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    Ok(adj)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn brute(adj: &[u64]) -> usize {
        let n = adj.len();
        (0u64..1 << n)
            .filter(|&s| (0..n).all(|v| s & (1 << v) == 0 || (s & !(1 << v)) & !adj[v] == 0))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    fn is_clique(adj: &[u64], c: &[usize]) -> bool {
        c.iter().all(|&a| c.iter().all(|&b| a == b || adj[a] & (1 << b) != 0))
    }

    #[test]
    fn small_graphs() {
        assert!(max_clique(&[]).is_empty());
        assert_eq!(max_clique(&[0]), vec![0]);
        // triangle plus pendant
        let adj = [0b0110, 0b0101, 0b1011, 0b0100];
        assert_eq!(max_clique(&adj), vec![0, 1, 2]);
    }

    proptest! {
        #[test]
        fn matches_brute_force(n in 1usize..13, edges in proptest::collection::vec(any::<bool>(), 78)) {
            let mut adj = vec![0u64; n];
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if edges[k] {
                        adj[i] |= 1 << j;
                        adj[j] |= 1 << i;
                    }
                    k += 1;
                }
            }
            let c = max_clique(&adj);
            prop_assert!(is_clique(&adj, &c));
            prop_assert_eq!(c.len(), brute(&adj));
        }
    }
}
