//! The free group on `rank` generators with its standard generating set;
//! the Cayley graph is the `2 rank`-regular tree.

use crate::divergence::GraphOracle;
use crate::error::{Error, Result};
use crate::oracles::grid::permutations;

#[derive(Clone, Debug)]
pub struct FreeOracle {
    rank: usize,
}

/// Letters are `2 i` for the `i`-th generator and `2 i + 1` for its inverse,
/// rendered `a, b, ...` and `A, B, ...`.
pub fn free_oracle(rank: usize) -> Result<FreeOracle> {
    if !(2..=26).contains(&rank) {
        return Err(Error::InvalidQuery(format!("free group rank must be in 2..=26, got {rank}")));
    }
    Ok(FreeOracle { rank })
}

fn inverse(letter: u8) -> u8 {
    letter ^ 1
}

impl FreeOracle {
    pub fn rank(&self) -> usize {
        self.rank
    }

    fn parse_letter(&self, c: char) -> Option<u8> {
        let (base, inv) = if c.is_ascii_lowercase() { (b'a', 0) } else if c.is_ascii_uppercase() { (b'A', 1) } else { return None };
        let i = (c as u8 - base) as usize;
        (i < self.rank).then_some((2 * i) as u8 | inv)
    }
}

impl GraphOracle for FreeOracle {
    /// Freely reduced word.
    type Vertex = Vec<u8>;

    fn name(&self) -> String {
        format!("free(rank={})", self.rank)
    }

    fn basepoint(&self) -> Vec<u8> {
        Vec::new()
    }

    /// Right multiplication by `a, A, b, B, ...`.
    fn neighbors(&self, v: &Vec<u8>, out: &mut Vec<Vec<u8>>) -> Result<()> {
        for letter in 0..(2 * self.rank) as u8 {
            let mut w = v.clone();
            if w.last() == Some(&inverse(letter)) {
                w.pop();
            } else {
                w.push(letter);
            }
            out.push(w);
        }
        Ok(())
    }

    fn canonical_key(&self, v: &Vec<u8>) -> Vec<u8> {
        v.clone()
    }

    fn render(&self, v: &Vec<u8>) -> String {
        if v.is_empty() {
            return "e".into();
        }
        v.iter()
            .map(|&l| {
                let c = b'a' + l / 2;
                if l & 1 == 1 { c.to_ascii_uppercase() as char } else { c as char }
            })
            .collect()
    }

    fn parse_vertex(&self, s: &str) -> Result<Vec<u8>> {
        let s = s.trim();
        if s == "e" {
            return Ok(Vec::new());
        }
        let word: Vec<u8> = s
            .chars()
            .map(|c| self.parse_letter(c).ok_or_else(|| Error::Parse(format!("bad letter `{c}` in `{s}`"))))
            .collect::<Result<_>>()?;
        if s.is_empty() || word.windows(2).any(|p| p[1] == inverse(p[0])) {
            return Err(Error::Parse(format!("`{s}` is not a reduced word")));
        }
        Ok(word)
    }

    fn vertex_transitive(&self) -> bool {
        true
    }

    fn is_tree(&self) -> bool {
        true
    }

    /// Automorphisms permuting the generators and inverting some of them,
    /// other than the identity.
    fn basepoint_symmetries(&self, v: &Vec<u8>) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        for p in permutations(self.rank) {
            for flips in 0u32..1 << self.rank {
                if flips == 0 && p.iter().enumerate().all(|(i, &j)| i == j) {
                    continue;
                }
                out.push(v.iter().map(|&l| (2 * p[(l / 2) as usize]) as u8 | ((l & 1) ^ (flips >> (l / 2) & 1) as u8)).collect());
            }
        }
        out
    }
}
