//! Walls of the Coxeter complex.
//!
//! A wall is the fixed hyperplane of a reflection `t = x s x^{-1}`; it is
//! identified by the positive root `+-x a_s`. Two chambers lie on opposite
//! sides of a wall exactly when the wall's reflection appears among the
//! reflections of a reduced gallery between them.

mod clique;
mod scan;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

pub use clique::{max_clique, max_parallel_family, max_parallel_family_with_bound, CLIQUE_BOUND};
pub use scan::{
    lemma1_scan, parse_pencil_csv, parse_pwt_csv, pwt_scan, pwt_scan_walls, walls_up_to, Chamber, PencilReport,
    PencilRow, PwtReport, PwtRow, NOT_FOUND,
};

use crate::coxeter::form::{is_negative_vector, is_positive_vector, BilinearForm, Root};
use crate::coxeter::{CoxeterSystem, Element};
use crate::error::{Error, Result};
use crate::scalar::QuadExtScalar;

/// Which half-apartment of a wall a chamber lies in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Positive,
    Negative,
}

#[derive(Clone, Debug)]
pub struct Wall {
    reflection: Element,
    root: Root,
}

impl PartialEq for Wall {
    fn eq(&self, other: &Self) -> bool {
        self.root.coords == other.root.coords
    }
}

impl Eq for Wall {}

impl Hash for Wall {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.root.coords.hash(state);
    }
}

impl fmt::Display for Wall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.reflection)
    }
}

/// Writes a positive root as `x a_j` by repeatedly applying the smallest
/// simple reflection that lowers its depth. Returns `(x, j)`, or `None`
/// if the vector is not a positive root.
fn descend(form: &BilinearForm, root: &[QuadExtScalar]) -> Option<(Vec<u8>, u8)> {
    const MAX_STEPS: usize = 100_000;
    if !is_positive_vector(root) {
        return None;
    }
    let mut beta = root.to_vec();
    let mut path = Vec::new();
    for _ in 0..MAX_STEPS {
        if let Some(j) = simple_index(&beta) {
            return Some((path, j as u8));
        }
        let i = (0..form.rank()).find(|&i| form.pair_simple(i, &beta).is_positive())?;
        form.reflect(i, &mut beta);
        if !is_positive_vector(&beta) {
            return None;
        }
        path.push(i as u8);
    }
    None
}

fn simple_index(v: &[QuadExtScalar]) -> Option<usize> {
    let mut found = None;
    for (i, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        if found.is_some() || *x != QuadExtScalar::one() {
            return None;
        }
        found = Some(i);
    }
    found
}

fn make_positive(mut v: Vec<QuadExtScalar>) -> Vec<QuadExtScalar> {
    if is_negative_vector(&v) {
        for x in v.iter_mut() {
            *x = -&*x;
        }
    }
    v
}

impl Wall {
    /// The wall of the simple reflection `s`.
    pub fn simple(system: &CoxeterSystem, s: u8) -> Wall {
        Wall {
            reflection: system.generator(s),
            root: Root { coords: system.form().simple_root(s as usize), depth: 0 },
        }
    }

    /// The wall with root `+-root`.
    pub fn from_root(system: &CoxeterSystem, root: &[QuadExtScalar]) -> Result<Wall> {
        let coords = make_positive(root.to_vec());
        let (path, j) = descend(system.form(), &coords)
            .ok_or_else(|| Error::InvalidQuery(format!("not a root: {}", Root { coords: coords.clone(), depth: 0 })))?;
        let mut word = path.clone();
        word.push(j);
        word.extend(path.iter().rev());
        Ok(Wall { reflection: system.normal_form(&word), root: Root { coords, depth: path.len() } })
    }

    pub fn reflection(&self) -> &Element {
        &self.reflection
    }

    pub fn root(&self) -> &Root {
        &self.root
    }

    /// The wall `g H`.
    pub fn translate(&self, system: &CoxeterSystem, g: &Element) -> Wall {
        let root = system.act(g, &self.root.coords);
        Wall::from_root(system, &root).expect("W maps roots to roots")
    }

    /// A chamber with a panel on this wall, lying on its positive side.
    pub fn base_chamber(&self, system: &CoxeterSystem) -> Element {
        let (path, _) = descend(system.form(), &self.root.coords).expect("wall roots are roots");
        system.normal_form(&path)
    }
}

/// Positive roots of the walls crossed by the normal-form gallery from `u`
/// to `v`, in gallery order.
pub(crate) fn separating_roots(system: &CoxeterSystem, u: &Element, v: &Element) -> Vec<Vec<QuadExtScalar>> {
    let form = system.form();
    let x = system.multiply(&system.inverse(u), v);
    // cols[j] = (u s_1 ... s_{i-1}) a_j, updated by right multiplication.
    let mut cols: Vec<Vec<QuadExtScalar>> =
        (0..system.rank()).map(|j| system.act(u, &form.simple_root(j))).collect();
    let mut out = Vec::with_capacity(x.length());
    for &s in x.word() {
        let s = s as usize;
        out.push(make_positive(cols[s].clone()));
        let pivot = cols[s].clone();
        for (j, col) in cols.iter_mut().enumerate() {
            if j == s {
                continue;
            }
            let b = form.get(s, j);
            if b.is_zero() {
                continue;
            }
            let twice = b.scale_int(2);
            for (c, p) in col.iter_mut().zip(&pivot) {
                if !p.is_zero() {
                    *c = &*c - &(&twice * p);
                }
            }
        }
        for c in cols[s].iter_mut() {
            *c = -&*c;
        }
    }
    out
}

/// Walls separating the chambers `u` and `v`, one per letter of the normal
/// form of `u^{-1} v`, in gallery order.
pub fn separating_walls(system: &CoxeterSystem, u: &Element, v: &Element) -> Vec<Wall> {
    walls_along(system, u, system.multiply(&system.inverse(u), v).word())
}

/// Walls crossed by the gallery `u, u s_1, u s_1 s_2, ...` for an arbitrary
/// reduced word `s_1 ... s_d`: the reflections
/// `u s_1 ... s_{i-1} s_i s_{i-1} ... s_1 u^{-1}`.
pub fn walls_along(system: &CoxeterSystem, u: &Element, word: &[u8]) -> Vec<Wall> {
    let mut prefix = u.word().to_vec();
    let mut out = Vec::with_capacity(word.len());
    for &s in word {
        let mut w = prefix.clone();
        w.push(s);
        w.extend(prefix.iter().rev());
        let reflection = system.normal_form(&w);
        let root = make_positive(system.act(&system.normal_form(&prefix), &system.form().simple_root(s as usize)));
        out.push(Wall { reflection, root: Root { coords: root, depth: 0 } });
        prefix.push(s);
    }
    for wall in out.iter_mut() {
        wall.root.depth = descend(system.form(), &wall.root.coords).map(|(p, _)| p.len()).unwrap_or(0);
    }
    out
}

/// `Positive` iff `w^{-1}` maps the wall's root to a positive root.
pub fn wall_side(system: &CoxeterSystem, w: &Element, wall: &Wall) -> Side {
    let inv = system.inverse(w);
    if is_positive_vector(&system.act(&inv, &wall.root.coords)) {
        Side::Positive
    } else {
        Side::Negative
    }
}

/// `|B(r1, r2)| >= 1`, decided exactly.
pub(crate) fn roots_parallel(form: &BilinearForm, r1: &[QuadExtScalar], r2: &[QuadExtScalar]) -> bool {
    pairing_is_parallel(&form.pair(r1, r2))
}

pub(crate) fn pairing_is_parallel(b: &QuadExtScalar) -> bool {
    let one = QuadExtScalar::one();
    (b - &one).signum() != Ordering::Less || (b + &one).signum() != Ordering::Greater
}

pub fn walls_parallel(system: &CoxeterSystem, h1: &Wall, h2: &Wall) -> Result<bool> {
    if h1 == h2 {
        return Err(Error::SameWall);
    }
    Ok(roots_parallel(system.form(), &h1.root.coords, &h2.root.coords))
}
