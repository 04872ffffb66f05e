use std::fmt;

use crate::coxeter::{CoxeterMatrix, INF};
use crate::error::{Error, Result};
use crate::scalar::QuadExtScalar;

/// The symmetric bilinear form `B(a_i, a_j) = -cos(pi / m_ij)` of the
/// geometric representation, with `-1` for infinite bonds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    entries: Vec<Vec<QuadExtScalar>>,
    /// `2 * B[i][j]`, cached for reflections.
    doubled: Vec<Vec<QuadExtScalar>>,
}

pub fn build_form(matrix: &CoxeterMatrix) -> Result<BilinearForm> {
    let n = matrix.rank();
    let mut entries = vec![vec![QuadExtScalar::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let m = matrix.get(i, j);
            entries[i][j] = if m == INF {
                QuadExtScalar::from_int(-1)
            } else {
                let c = QuadExtScalar::cos_pi_over(m)
                    .ok_or(Error::UnsupportedLabel { row: i, col: j, label: m })?;
                -c
            };
        }
    }
    let doubled = entries
        .iter()
        .map(|row| row.iter().map(|x| x.scale_int(2)).collect())
        .collect();
    Ok(BilinearForm { entries, doubled })
}

impl BilinearForm {
    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &QuadExtScalar {
        &self.entries[i][j]
    }

    /// `B(a_i, v)` for a vector in simple-root coordinates.
    pub fn pair_simple(&self, i: usize, v: &[QuadExtScalar]) -> QuadExtScalar {
        let mut acc = QuadExtScalar::zero();
        for (b, x) in self.entries[i].iter().zip(v) {
            if !x.is_zero() && !b.is_zero() {
                acc = &acc + &(b * x);
            }
        }
        acc
    }

    pub fn pair(&self, u: &[QuadExtScalar], v: &[QuadExtScalar]) -> QuadExtScalar {
        let mut acc = QuadExtScalar::zero();
        for (i, x) in u.iter().enumerate() {
            if !x.is_zero() {
                acc = &acc + &(x * &self.pair_simple(i, v));
            }
        }
        acc
    }

    /// Apply the simple reflection `s_i` in place: `v <- v - 2 B(a_i, v) a_i`.
    pub fn reflect(&self, i: usize, v: &mut [QuadExtScalar]) {
        let mut twice = QuadExtScalar::zero();
        for (b, x) in self.doubled[i].iter().zip(v.iter()) {
            if !x.is_zero() && !b.is_zero() {
                twice = &twice + &(b * x);
            }
        }
        v[i] = &v[i] - &twice;
    }

    /// Apply the word `w = s_{w_1} ... s_{w_k}` to `v` (rightmost letter acts first).
    pub fn apply_word(&self, word: &[u8], v: &mut [QuadExtScalar]) {
        for &g in word.iter().rev() {
            self.reflect(g as usize, v);
        }
    }

    pub fn simple_root(&self, i: usize) -> Vec<QuadExtScalar> {
        let mut v = vec![QuadExtScalar::zero(); self.rank()];
        v[i] = QuadExtScalar::one();
        v
    }
}

/// A vector in simple-root coordinates together with the length of the
/// shortest word carrying a simple root onto it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    pub coords: Vec<QuadExtScalar>,
    pub depth: usize,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        is_positive_vector(&self.coords)
    }
}

pub fn is_positive_vector(v: &[QuadExtScalar]) -> bool {
    v.iter().all(|x| !x.is_negative()) && v.iter().any(|x| !x.is_zero())
}

pub fn is_negative_vector(v: &[QuadExtScalar]) -> bool {
    v.iter().all(|x| !x.is_positive()) && v.iter().any(|x| !x.is_zero())
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterMatrix;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn half(n: i64) -> QuadExtScalar {
        QuadExtScalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(2)))
    }

    #[test]
    fn off_diagonal_values() {
        let f = build_form(&CoxeterMatrix::dihedral(3)).unwrap();
        assert_eq!(f.get(0, 1), &half(-1));
        let f = build_form(&CoxeterMatrix::dihedral(2)).unwrap();
        assert!(f.get(0, 1).is_zero());
        let f = build_form(&CoxeterMatrix::dihedral(INF)).unwrap();
        assert_eq!(f.get(0, 1), &QuadExtScalar::from_int(-1));
        assert_eq!(f.get(1, 1), &QuadExtScalar::one());
    }

    #[test]
    fn rejects_label_five() {
        let err = build_form(&CoxeterMatrix::dihedral(5)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedLabel { label: 5, .. }));
    }

    #[test]
    fn form_is_symmetric_with_entries_in_range() {
        for m in [
            CoxeterMatrix::named("A3").unwrap(),
            CoxeterMatrix::named("triangle-3-3-4").unwrap(),
            CoxeterMatrix::named("pentagon").unwrap(),
            CoxeterMatrix::named("G2").unwrap(),
        ] {
            let f = build_form(&m).unwrap();
            for i in 0..f.rank() {
                assert_eq!(f.get(i, i), &QuadExtScalar::one());
                for j in 0..f.rank() {
                    assert_eq!(f.get(i, j), f.get(j, i));
                    if i != j {
                        assert!(!f.get(i, j).is_positive());
                        assert!(f.get(i, j) >= &QuadExtScalar::from_int(-1));
                    }
                }
            }
        }
    }

    #[test]
    fn reflections_preserve_the_form() {
        let f = build_form(&CoxeterMatrix::named("triangle-3-3-4").unwrap()).unwrap();
        let mut v = f.simple_root(2);
        f.apply_word(&[0, 1, 2, 0, 1], &mut v);
        assert_eq!(f.pair(&v, &v), QuadExtScalar::one());
    }
}
