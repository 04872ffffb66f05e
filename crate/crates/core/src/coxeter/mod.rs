//! Coxeter systems: matrices, the geometric representation, small roots,
//! the ShortLex automaton and group arithmetic on normal-form words.

pub mod automaton;
pub mod form;
mod parse;
pub mod roots;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

pub use automaton::{build_automaton, build_automaton_of_kind, AutomatonKind, WordAutomaton, REJECT};
pub use form::{build_form, BilinearForm, Root};
pub use parse::{parse_coxeter_file, render_coxeter_file};
pub use roots::{small_roots, small_roots_with_bound, RootImage, SmallRootSet};

use crate::error::{Error, Result};
use crate::scalar::QuadExtScalar;

/// Sentinel label for an infinite bond.
pub const INF: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterMatrix {
    rank: usize,
    m: Vec<u32>,
}

impl CoxeterMatrix {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let rank = rows.len();
        if rank == 0 {
            return Err(Error::InvalidMatrix("rank must be at least 1".into()));
        }
        if rank > u8::MAX as usize {
            return Err(Error::InvalidMatrix(format!("rank {rank} exceeds 255")));
        }
        let mut m = Vec::with_capacity(rank * rank);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::InvalidMatrix(format!("row {i} has {} entries, expected {rank}", row.len())));
            }
            m.extend_from_slice(row);
        }
        for i in 0..rank {
            if m[i * rank + i] != 1 {
                return Err(Error::InvalidMatrix(format!("diagonal entry ({i}, {i}) must be 1")));
            }
            for j in 0..rank {
                let (a, b) = (m[i * rank + j], m[j * rank + i]);
                if a != b {
                    return Err(Error::InvalidMatrix(format!("entries ({i}, {j}) and ({j}, {i}) differ")));
                }
                if i != j && a < 2 {
                    return Err(Error::InvalidMatrix(format!("off-diagonal entry ({i}, {j}) must be >= 2")));
                }
            }
        }
        Ok(Self { rank, m })
    }

    /// Builds the matrix from its strict upper triangle, row by row.
    pub fn from_upper(rank: usize, upper: &[u32]) -> Result<Self> {
        if upper.len() != rank * rank.saturating_sub(1) / 2 {
            return Err(Error::InvalidMatrix(format!(
                "expected {} upper-triangle labels for rank {rank}, got {}",
                rank * rank.saturating_sub(1) / 2,
                upper.len()
            )));
        }
        let mut rows = vec![vec![1u32; rank]; rank];
        let mut it = upper.iter();
        for i in 0..rank {
            for j in i + 1..rank {
                let v = *it.next().unwrap();
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        Self::new(rows)
    }

    pub fn dihedral(m: u32) -> Self {
        Self::from_upper(2, &[m]).expect("dihedral label >= 2")
    }

    /// The systems shipped with the crate.
    ///
    /// `triangle-p-q-r` is the rank-3 system with `m01 = p, m12 = q, m02 = r`.
    pub fn named(name: &str) -> Option<Self> {
        let upper: (usize, Vec<u32>) = match name {
            "infinite-dihedral" => (2, vec![INF]),
            "A1" => (1, vec![]),
            "A2" => (2, vec![3]),
            "B2" => (2, vec![4]),
            "G2" => (2, vec![6]),
            "A3" => (3, vec![3, 2, 3]),
            "B3" => (3, vec![4, 2, 3]),
            "affine-A2" => (3, vec![3, 3, 3]),
            "affine-C2" => (3, vec![4, 2, 4]),
            "affine-G2" => (3, vec![6, 2, 3]),
            // right-angled pentagon: adjacent sides commute, others are free
            "pentagon" => (5, vec![2, INF, INF, 2, 2, INF, INF, 2, INF, 2]),
            _ => {
                if let Some(rest) = name.strip_prefix("triangle-") {
                    let labels: Vec<u32> = rest.split('-').map(parse_label).collect::<Option<_>>()?;
                    if labels.len() != 3 {
                        return None;
                    }
                    // order of the upper triangle is (0,1), (0,2), (1,2)
                    (3, vec![labels[0], labels[2], labels[1]])
                } else if let Some(rest) = name.strip_prefix("dihedral-") {
                    (2, vec![parse_label(rest)?])
                } else {
                    return None;
                }
            }
        };
        Self::from_upper(upper.0, &upper.1).ok()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.m[i * self.rank + j]
    }
}

pub(crate) fn parse_label(s: &str) -> Option<u32> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Some(INF),
        t => t.parse().ok(),
    }
}

pub(crate) fn render_label(m: u32) -> String {
    if m == INF {
        "inf".into()
    } else {
        m.to_string()
    }
}

/// A group element, stored as its ShortLex-least reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Element {
    word: Vec<u8>,
}

impl Element {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Wraps a word that is already known to be in normal form.
    pub(crate) fn from_normal_word(word: Vec<u8>) -> Self {
        Self { word }
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// ShortLex order.
impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word.len().cmp(&other.word.len()).then_with(|| self.word.cmp(&other.word))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_word(&self.word))
    }
}

/// `e` for the empty word, otherwise dot-separated generator indices.
pub fn render_word(word: &[u8]) -> String {
    if word.is_empty() {
        return "e".into();
    }
    word.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(".")
}

pub fn parse_word(s: &str) -> Result<Vec<u8>> {
    let s = s.trim();
    if s == "e" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split('.')
        .map(|t| t.trim().parse::<u8>().map_err(|_| Error::Parse(format!("bad generator `{t}` in word `{s}`"))))
        .collect()
}

#[derive(Debug)]
struct SystemData {
    name: String,
    matrix: CoxeterMatrix,
    form: BilinearForm,
    small: SmallRootSet,
    automaton: WordAutomaton,
}

/// A Coxeter system with its precomputed combinatorial data. Cheap to clone.
#[derive(Clone, Debug)]
pub struct CoxeterSystem(Arc<SystemData>);

impl CoxeterSystem {
    pub fn new(name: impl Into<String>, matrix: CoxeterMatrix) -> Result<Self> {
        let form = build_form(&matrix)?;
        let small = small_roots(&form)?;
        let automaton = build_automaton(&small);
        Ok(Self(Arc::new(SystemData { name: name.into(), matrix, form, small, automaton })))
    }

    pub fn named(name: &str) -> Result<Self> {
        let m = CoxeterMatrix::named(name).ok_or_else(|| Error::Parse(format!("unknown Coxeter system `{name}`")))?;
        Self::new(name, m)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.0.matrix
    }

    pub fn rank(&self) -> usize {
        self.0.matrix.rank()
    }

    pub fn form(&self) -> &BilinearForm {
        &self.0.form
    }

    pub fn small_roots(&self) -> &SmallRootSet {
        &self.0.small
    }

    pub fn automaton(&self) -> &WordAutomaton {
        &self.0.automaton
    }

    pub fn is_finite(&self) -> bool {
        self.0.automaton.language_is_finite()
    }

    pub fn generator(&self, s: u8) -> Element {
        assert!((s as usize) < self.rank(), "generator {s} out of range");
        Element::from_normal_word(vec![s])
    }

    /// Normal form of `w * s`.
    ///
    /// Scans `w` from the right, tracking the small root
    /// `(w_{i+1} ... w_k) a_s`. Meeting `a_{w_i}` means the letter `w_i`
    /// cancels; meeting `a_t` with `t` smaller than the next letter means
    /// inserting `t` there gives an earlier word. Once the tracked root
    /// leaves the small roots it never returns, so the scan stops.
    pub fn right_mul_gen(&self, w: &Element, s: u8) -> Element {
        assert!((s as usize) < self.rank(), "generator {s} out of range");
        let small = &self.0.small;
        let word = &w.word;
        let mut gamma = small.simple_id(s as usize);
        let mut insert: Option<(usize, u8)> = None;
        let mut i = word.len();
        loop {
            if let Some(t) = small.simple_of(gamma) {
                if i < word.len() && t < word[i] {
                    insert = Some((i, t));
                }
            }
            if i == 0 {
                break;
            }
            match small.image(gamma, word[i - 1]) {
                RootImage::Negative => {
                    let mut out = word.clone();
                    out.remove(i - 1);
                    return Element::from_normal_word(out);
                }
                RootImage::Large => break,
                RootImage::Small(j) => gamma = j,
            }
            i -= 1;
        }
        let mut out = Vec::with_capacity(word.len() + 1);
        match insert {
            Some((pos, t)) => {
                out.extend_from_slice(&word[..pos]);
                out.push(t);
                out.extend_from_slice(&word[pos..]);
            }
            None => {
                out.extend_from_slice(word);
                out.push(s);
            }
        }
        Element::from_normal_word(out)
    }

    pub fn normal_form(&self, word: &[u8]) -> Element {
        word.iter().fold(Element::identity(), |acc, &g| self.right_mul_gen(&acc, g))
    }

    pub fn multiply(&self, u: &Element, v: &Element) -> Element {
        v.word.iter().fold(u.clone(), |acc, &g| self.right_mul_gen(&acc, g))
    }

    pub fn left_mul_gen(&self, s: u8, w: &Element) -> Element {
        self.multiply(&self.generator(s), w)
    }

    pub fn inverse(&self, w: &Element) -> Element {
        let rev: Vec<u8> = w.word.iter().rev().copied().collect();
        self.normal_form(&rev)
    }

    /// Generators `s` with `l(s w) < l(w)`, i.e. `w^{-1} a_s < 0`.
    pub fn left_descents(&self, w: &Element) -> Vec<u8> {
        (0..self.rank() as u8).filter(|&s| self.is_left_descent(w, s)).collect()
    }

    pub fn is_left_descent(&self, w: &Element, s: u8) -> bool {
        // w^{-1} a_s: the letters of w act left to right.
        let small = &self.0.small;
        let mut gamma = small.simple_id(s as usize);
        for &g in &w.word {
            match small.image(gamma, g) {
                RootImage::Negative => return true,
                RootImage::Large => return false,
                RootImage::Small(j) => gamma = j,
            }
        }
        false
    }

    /// Generators `s` with `l(w s) < l(w)`.
    pub fn right_descents(&self, w: &Element) -> Vec<u8> {
        (0..self.rank() as u8)
            .filter(|&s| self.right_mul_gen(w, s).length() < w.length())
            .collect()
    }

    /// `w` applied to the vector `v` in the geometric representation.
    pub fn act(&self, w: &Element, v: &[QuadExtScalar]) -> Vec<QuadExtScalar> {
        let mut out = v.to_vec();
        self.0.form.apply_word(&w.word, &mut out);
        out
    }

    /// The positive root `w a_s` up to sign, as used for walls.
    pub fn root_of(&self, w: &Element, s: u8) -> Vec<QuadExtScalar> {
        self.act(w, &self.0.form.simple_root(s as usize))
    }

    /// All elements of length at most `radius`, in ShortLex order.
    pub fn elements_up_to(&self, radius: usize) -> Vec<Element> {
        self.0
            .automaton
            .words_up_to(radius)
            .into_iter()
            .map(Element::from_normal_word)
            .collect()
    }

    /// Checks a word's letters and wraps it if it is already a normal form.
    pub fn element_from_normal_word(&self, word: Vec<u8>) -> Result<Element> {
        if word.iter().any(|&g| g as usize >= self.rank()) {
            return Err(Error::Parse(format!("generator out of range in `{}`", render_word(&word))));
        }
        if !self.0.automaton.accepts(&word) {
            return Err(Error::Parse(format!("`{}` is not a normal form", render_word(&word))));
        }
        Ok(Element::from_normal_word(word))
    }
}

#[cfg(test)]
mod tests;
