//! Small (elementary) roots and their reflection table.
//!
//! The small roots form the finite set generated from the simple roots by
//! the moves `b -> s_i(b)` with `-1 < B(a_i, b) < 0`. Every other positive
//! root dominates some root and stays non-small under all further simple
//! reflections, which is what makes the table below a finite description
//! of the group's combinatorics.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};

use crate::coxeter::form::{BilinearForm, Root};
use crate::error::{Error, Result};
use crate::scalar::QuadExtScalar;

pub const DEFAULT_CLOSURE_BOUND: usize = 100_000;

/// Image of a small root under a simple reflection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootImage {
    Small(u32),
    /// The root was the simple root of this reflection.
    Negative,
    /// A positive root that is not small.
    Large,
}

#[derive(Clone, Debug)]
pub struct SmallRootSet {
    form: BilinearForm,
    roots: Vec<Root>,
    index: HashMap<Vec<QuadExtScalar>, u32>,
    /// `table[root * rank + gen]`
    table: Vec<RootImage>,
    /// `simple_of[root]` is `Some(i)` when the root is `a_i`.
    simple_of: Vec<Option<u8>>,
}

pub fn small_roots(form: &BilinearForm) -> Result<SmallRootSet> {
    small_roots_with_bound(form, DEFAULT_CLOSURE_BOUND)
}

pub fn small_roots_with_bound(form: &BilinearForm, bound: usize) -> Result<SmallRootSet> {
    let rank = form.rank();
    let minus_one = QuadExtScalar::from_int(-1);
    let zero = QuadExtScalar::zero();

    let mut roots: Vec<Root> = Vec::new();
    let mut index: HashMap<Vec<QuadExtScalar>, u32> = HashMap::new();
    let mut queue = VecDeque::new();
    for i in 0..rank {
        let coords = form.simple_root(i);
        index.insert(coords.clone(), i as u32);
        roots.push(Root { coords, depth: 0 });
        queue.push_back(i);
    }

    while let Some(id) = queue.pop_front() {
        for i in 0..rank {
            let beta = &roots[id];
            if beta.coords == form.simple_root(i) {
                continue;
            }
            let p = form.pair_simple(i, &beta.coords);
            // Only strictly inside (-1, 0) produces a new small root; p >= 0
            // lowers the root and p <= -1 yields a dominant one.
            if !(p > minus_one && p < zero) {
                continue;
            }
            let mut image = beta.coords.clone();
            form.reflect(i, &mut image);
            if index.contains_key(&image) {
                continue;
            }
            if roots.len() >= bound {
                return Err(Error::ClosureOverflow { bound });
            }
            let depth = beta.depth + 1;
            index.insert(image.clone(), roots.len() as u32);
            roots.push(Root { coords: image, depth });
            queue.push_back(roots.len() - 1);
        }
    }

    let mut table = Vec::with_capacity(roots.len() * rank);
    for (id, root) in roots.iter().enumerate() {
        for i in 0..rank {
            let img = if id == i {
                RootImage::Negative
            } else {
                let mut v = root.coords.clone();
                form.reflect(i, &mut v);
                match index.get(&v) {
                    Some(&j) => RootImage::Small(j),
                    None => RootImage::Large,
                }
            };
            table.push(img);
        }
    }
    let simple_of = (0..roots.len())
        .map(|id| (id < rank).then_some(id as u8))
        .collect();

    Ok(SmallRootSet { form: form.clone(), roots, index, table, simple_of })
}

impl SmallRootSet {
    pub fn form(&self) -> &BilinearForm {
        &self.form
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn get(&self, id: u32) -> &Root {
        &self.roots[id as usize]
    }

    pub fn id_of(&self, coords: &[QuadExtScalar]) -> Option<u32> {
        self.index.get(coords).copied()
    }

    /// Id of the simple root `a_i` (simple roots come first).
    pub fn simple_id(&self, i: usize) -> u32 {
        i as u32
    }

    pub fn simple_of(&self, id: u32) -> Option<u8> {
        self.simple_of[id as usize]
    }

    #[inline]
    pub fn image(&self, id: u32, gen: u8) -> RootImage {
        self.table[id as usize * self.rank() + gen as usize]
    }

    /// Ids are ordered by discovery; this returns them sorted by depth then
    /// coordinates, for stable display.
    pub fn display_order(&self) -> Vec<u32> {
        let mut ids: Vec<u32> = (0..self.len() as u32).collect();
        ids.sort_by(|&a, &b| {
            let (ra, rb) = (self.get(a), self.get(b));
            ra.depth.cmp(&rb.depth).then_with(|| {
                ra.coords
                    .iter()
                    .zip(&rb.coords)
                    .map(|(x, y)| x.cmp(y))
                    .find(|o| *o != Ordering::Equal)
                    .unwrap_or(Ordering::Equal)
            })
        });
        ids
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::form::{build_form, is_positive_vector};
    use crate::coxeter::CoxeterMatrix;

    fn small(name: &str) -> SmallRootSet {
        small_roots(&build_form(&CoxeterMatrix::named(name).unwrap()).unwrap()).unwrap()
    }

    /// Independent oracle: enumerate positive roots reachable by words of
    /// length <= `depth` and drop every root that dominates a different
    /// positive root. Domination of `g` over `b` is witnessed by
    /// `B(g, b) >= 1` with `g` produced later than `b`; this is the
    /// classical criterion for comparable positive roots.
    fn small_by_dominance(name: &str, depth: usize) -> usize {
        let form = build_form(&CoxeterMatrix::named(name).unwrap()).unwrap();
        let rank = form.rank();
        let mut layers: Vec<Vec<Vec<QuadExtScalar>>> = vec![(0..rank).map(|i| form.simple_root(i)).collect()];
        let mut seen: Vec<Vec<QuadExtScalar>> = layers[0].clone();
        for _ in 0..depth {
            let mut next = Vec::new();
            for v in layers.last().unwrap() {
                for i in 0..rank {
                    let mut w = v.clone();
                    form.reflect(i, &mut w);
                    if is_positive_vector(&w) && !seen.contains(&w) {
                        seen.push(w.clone());
                        next.push(w);
                    }
                }
            }
            layers.push(next);
        }
        let one = QuadExtScalar::one();
        let flat: Vec<(usize, &Vec<QuadExtScalar>)> = layers
            .iter()
            .enumerate()
            .flat_map(|(d, l)| l.iter().map(move |v| (d, v)))
            .collect();
        flat.iter()
            .filter(|(d, g)| {
                !flat.iter().any(|(e, b)| e < d && form.pair(g, b) >= one)
            })
            .count()
    }

    #[test]
    fn infinite_dihedral_has_two() {
        assert_eq!(small("infinite-dihedral").len(), 2);
        assert_eq!(small_by_dominance("infinite-dihedral", 5), 2);
    }

    #[test]
    fn a2_has_all_three_positive_roots() {
        assert_eq!(small("A2").len(), 3);
        assert_eq!(small_by_dominance("A2", 5), 3);
    }

    #[test]
    fn affine_a2_has_six() {
        let s = small("affine-A2");
        assert_eq!(s.len(), 6);
        assert_eq!(small_by_dominance("affine-A2", 6), 6);
        // three simple roots plus the three pairwise sums
        let two_sums = s.roots().iter().filter(|r| r.depth == 1).count();
        assert_eq!(two_sums, 3);
    }

    #[test]
    fn matches_dominance_oracle_on_more_systems() {
        for name in ["B2", "A3", "G2", "pentagon", "triangle-3-3-4", "affine-C2"] {
            assert_eq!(small(name).len(), small_by_dominance(name, 6), "{name}");
        }
    }

    #[test]
    fn stored_roots_are_positive_unit_vectors() {
        for name in ["affine-A2", "pentagon", "triangle-3-3-4", "B2"] {
            let s = small(name);
            for r in s.roots() {
                assert!(r.is_positive());
                assert_eq!(s.form().pair(&r.coords, &r.coords), QuadExtScalar::one());
            }
        }
    }

    #[test]
    fn overflow_bound_is_reported() {
        let form = build_form(&CoxeterMatrix::named("A3").unwrap()).unwrap();
        assert_eq!(
            small_roots_with_bound(&form, 4).unwrap_err(),
            Error::ClosureOverflow { bound: 4 }
        );
    }

    #[test]
    fn table_negative_only_on_own_simple_root() {
        let s = small("triangle-3-3-4");
        for id in 0..s.len() as u32 {
            for g in 0..s.rank() as u8 {
                let neg = s.image(id, g) == RootImage::Negative;
                assert_eq!(neg, s.simple_of(id) == Some(g));
            }
        }
    }
}
