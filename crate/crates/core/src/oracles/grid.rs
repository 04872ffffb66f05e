//! The standard Cayley graph of `Z^d`.

use crate::divergence::GraphOracle;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct GridOracle {
    d: usize,
}

pub fn grid_oracle(d: usize) -> Result<GridOracle> {
    if d == 0 || d > 6 {
        return Err(Error::InvalidQuery(format!("grid dimension must be in 1..=6, got {d}")));
    }
    Ok(GridOracle { d })
}

/// Permutations of `0..d` in lexicographic order.
pub(crate) fn permutations(d: usize) -> Vec<Vec<usize>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..d {
        for rest in permutations(d - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

impl GridOracle {
    pub fn dimension(&self) -> usize {
        self.d
    }
}

impl GraphOracle for GridOracle {
    type Vertex = Vec<i32>;

    fn name(&self) -> String {
        format!("grid(d={})", self.d)
    }

    fn basepoint(&self) -> Vec<i32> {
        vec![0; self.d]
    }

    /// `+e_0, -e_0, +e_1, -e_1, ...`
    fn neighbors(&self, v: &Vec<i32>, out: &mut Vec<Vec<i32>>) -> Result<()> {
        for i in 0..self.d {
            for step in [1, -1] {
                let mut w = v.clone();
                w[i] = w[i].checked_add(step).ok_or_else(|| Error::InvalidQuery("grid coordinate overflow".into()))?;
                out.push(w);
            }
        }
        Ok(())
    }

    fn canonical_key(&self, v: &Vec<i32>) -> Vec<u8> {
        v.iter().flat_map(|x| x.to_le_bytes()).collect()
    }

    fn render(&self, v: &Vec<i32>) -> String {
        let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }

    fn parse_vertex(&self, s: &str) -> Result<Vec<i32>> {
        let bad = || Error::Parse(format!("bad grid vertex `{s}`"));
        let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let v: Vec<i32> = inner.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        if v.len() != self.d {
            return Err(bad());
        }
        Ok(v)
    }

    fn vertex_transitive(&self) -> bool {
        true
    }

    fn is_tree(&self) -> bool {
        self.d == 1
    }

    /// Signed coordinate permutations other than the identity.
    fn basepoint_symmetries(&self, v: &Vec<i32>) -> Vec<Vec<i32>> {
        let mut out = Vec::new();
        for p in permutations(self.d) {
            for signs in 0u32..1 << self.d {
                if signs == 0 && p.iter().enumerate().all(|(i, &j)| i == j) {
                    continue;
                }
                out.push((0..self.d).map(|i| if signs >> i & 1 == 1 { -v[p[i]] } else { v[p[i]] }).collect());
            }
        }
        out
    }
}
