//! Finite automata over the generator alphabet whose states are subsets of
//! small roots.
//!
//! The ShortLex automaton tracks, for an accepted word `w`, the small roots
//! `b` for which appending the generator with simple root `b` would either
//! shorten `w` or admit a lexicographically earlier reduced word. Reading
//! `s` from state `X`:
//!
//! * reject when `a_s` is in `X`;
//! * otherwise move to `{a_s} u (s(X) n E) u ({s(a_t) : t < s} n E)`.
//!
//! Dropping the last term gives the automaton of all reduced words.

use std::collections::HashMap;

use crate::coxeter::roots::{RootImage, SmallRootSet};

pub const REJECT: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutomatonKind {
    /// One word per element: the ShortLex-least reduced word.
    ShortLex,
    /// Every reduced word.
    ReducedWords,
}

#[derive(Clone, Debug)]
pub struct WordAutomaton {
    kind: AutomatonKind,
    rank: usize,
    /// Sorted small-root ids per state; state 0 is the start state.
    states: Vec<Vec<u32>>,
    /// `transitions[state * rank + gen]`, or `REJECT`.
    transitions: Vec<u32>,
}

/// Builds the ShortLex automaton.
pub fn build_automaton(small: &SmallRootSet) -> WordAutomaton {
    build_automaton_of_kind(small, AutomatonKind::ShortLex)
}

pub fn build_automaton_of_kind(small: &SmallRootSet, kind: AutomatonKind) -> WordAutomaton {
    let rank = small.rank();
    let mut states: Vec<Vec<u32>> = vec![Vec::new()];
    let mut ids: HashMap<Vec<u32>, u32> = HashMap::from([(Vec::new(), 0)]);
    let mut transitions: Vec<u32> = Vec::new();

    let mut cursor = 0;
    while cursor < states.len() {
        for s in 0..rank as u8 {
            let state = &states[cursor];
            let simple = small.simple_id(s as usize);
            if state.binary_search(&simple).is_ok() {
                transitions.push(REJECT);
                continue;
            }
            let mut next = vec![simple];
            for &b in state {
                if let RootImage::Small(j) = small.image(b, s) {
                    next.push(j);
                }
            }
            if kind == AutomatonKind::ShortLex {
                for t in 0..s {
                    if let RootImage::Small(j) = small.image(small.simple_id(t as usize), s) {
                        next.push(j);
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            let id = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    let id = states.len() as u32;
                    ids.insert(next.clone(), id);
                    states.push(next);
                    id
                }
            };
            transitions.push(id);
        }
        cursor += 1;
    }

    WordAutomaton { kind, rank, states, transitions }
}

impl WordAutomaton {
    pub fn kind(&self) -> AutomatonKind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn start(&self) -> u32 {
        0
    }

    pub fn state_roots(&self, state: u32) -> &[u32] {
        &self.states[state as usize]
    }

    #[inline]
    pub fn step(&self, state: u32, gen: u8) -> u32 {
        if state == REJECT {
            return REJECT;
        }
        self.transitions[state as usize * self.rank + gen as usize]
    }

    pub fn run(&self, word: &[u8]) -> u32 {
        word.iter().fold(self.start(), |st, &g| self.step(st, g))
    }

    pub fn accepts(&self, word: &[u8]) -> bool {
        word.iter().all(|&g| (g as usize) < self.rank) && self.run(word) != REJECT
    }

    /// Number of accepted words of each length `0..=max_len`.
    pub fn count_by_length(&self, max_len: usize) -> Vec<u128> {
        let mut counts = vec![0u128; self.states.len()];
        counts[0] = 1;
        let mut out = vec![1u128];
        for _ in 0..max_len {
            let mut next = vec![0u128; self.states.len()];
            for (st, &c) in counts.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for g in 0..self.rank as u8 {
                    let t = self.step(st as u32, g);
                    if t != REJECT {
                        next[t as usize] += c;
                    }
                }
            }
            out.push(next.iter().sum());
            counts = next;
        }
        out
    }

    /// All accepted words of length `<= max_len`, ordered by length and then
    /// lexicographically.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        let mut layer: Vec<(Vec<u8>, u32)> = vec![(Vec::new(), self.start())];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (w, st) in &layer {
                for g in 0..self.rank as u8 {
                    let t = self.step(*st, g);
                    if t != REJECT {
                        let mut v = w.clone();
                        v.push(g);
                        next.push((v, t));
                    }
                }
            }
            out.extend(next.iter().map(|(w, _)| w.clone()));
            layer = next;
        }
        out
    }

    /// Whether the accepted language is finite, i.e. the transition graph
    /// restricted to live states has no cycle. Every non-reject state is
    /// accepting, so this decides finiteness of the group for ShortLex.
    pub fn language_is_finite(&self) -> bool {
        // Kahn's algorithm on the live transition graph.
        let n = self.states.len();
        let mut indeg = vec![0usize; n];
        for st in 0..n {
            for g in 0..self.rank as u8 {
                let t = self.step(st as u32, g);
                if t != REJECT {
                    indeg[t as usize] += 1;
                }
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut removed = 0;
        while let Some(st) = stack.pop() {
            removed += 1;
            for g in 0..self.rank as u8 {
                let t = self.step(st as u32, g);
                if t != REJECT {
                    indeg[t as usize] -= 1;
                    if indeg[t as usize] == 0 {
                        stack.push(t as usize);
                    }
                }
            }
        }
        removed == n
    }

    /// Whether some accepted word is longer than `bound`.
    pub fn accepts_longer_than(&self, bound: usize) -> bool {
        // A word of length bound+1 exists iff the DP count at that length is
        // positive; iterate state reachability instead of counting.
        let mut live = vec![false; self.states.len()];
        live[0] = true;
        for _ in 0..=bound {
            let mut next = vec![false; self.states.len()];
            let mut any = false;
            for (st, &on) in live.iter().enumerate() {
                if !on {
                    continue;
                }
                for g in 0..self.rank as u8 {
                    let t = self.step(st as u32, g);
                    if t != REJECT {
                        next[t as usize] = true;
                        any = true;
                    }
                }
            }
            if !any {
                return false;
            }
            live = next;
        }
        true
    }
}
