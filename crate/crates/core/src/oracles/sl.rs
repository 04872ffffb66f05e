//! `SL_N` over `F_q[t, t^{-1}]` and the Cayley graph of `SL_2` with respect
//! to elementary matrices.

use std::fmt;

use crate::divergence::GraphOracle;
use crate::error::{Error, Result};
use crate::oracles::laurent::{capacity, parse_laurent, LaurentPoly};

pub const DEFAULT_DEGREE_BOUND: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SlMatrix<const N: usize> {
    e: [[LaurentPoly; N]; N],
}

impl<const N: usize> SlMatrix<N> {
    pub fn identity(q: u8) -> Self {
        let mut e = [[LaurentPoly::zero(q); N]; N];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = LaurentPoly::one(q);
        }
        Self { e }
    }

    /// The elementary matrix with `x` in position `(i, j)`, `i != j`.
    pub fn elementary(q: u8, i: usize, j: usize, x: LaurentPoly) -> Self {
        assert!(i != j && i < N && j < N);
        let mut m = Self::identity(q);
        m.e[i][j] = x;
        m
    }

    /// Builds a matrix from entries, checking the determinant.
    pub fn from_entries(e: [[LaurentPoly; N]; N]) -> Result<Self> {
        let m = Self { e };
        m.check_det()?;
        Ok(m)
    }

    pub fn q(&self) -> u8 {
        self.e[0][0].q()
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.e[i][j]
    }

    pub fn entries(&self) -> &[[LaurentPoly; N]; N] {
        &self.e
    }

    /// Exact determinant by cofactor expansion along the first row.
    pub fn det(&self) -> Result<LaurentPoly> {
        let rows: Vec<Vec<LaurentPoly>> = self.e.iter().map(|r| r.to_vec()).collect();
        det_of(&rows)
    }

    fn check_det(&self) -> Result<()> {
        let d = self.det()?;
        if d.is_one() {
            Ok(())
        } else {
            Err(Error::DetViolation(format!("determinant {d} of {self}")))
        }
    }

    /// Largest entry span.
    pub fn max_span(&self) -> usize {
        self.e.iter().flatten().map(LaurentPoly::span).max().unwrap_or(0)
    }

    pub fn map_entries(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        let mut e = self.e;
        for x in e.iter_mut().flatten() {
            *x = f(x);
        }
        Self { e }
    }

    /// Size-prefixed bytes: `N`, then per entry in row-major order the
    /// valuation (i32 LE, 0 for zero), the coefficient count (u16 LE) and
    /// one byte per coefficient.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = vec![N as u8];
        for x in self.e.iter().flatten() {
            out.extend_from_slice(&x.valuation().unwrap_or(0).to_le_bytes());
            out.extend_from_slice(&(x.num_coeffs() as u16).to_le_bytes());
            out.extend(x.coeffs());
        }
        out
    }

    pub fn from_canonical_key(q: u8, key: &[u8]) -> Result<Self> {
        let bad = || Error::Parse("malformed matrix key".into());
        if key.first() != Some(&(N as u8)) {
            return Err(bad());
        }
        let mut pos = 1;
        let mut e = [[LaurentPoly::zero(q); N]; N];
        for x in e.iter_mut().flatten() {
            let val = i32::from_le_bytes(key.get(pos..pos + 4).ok_or_else(bad)?.try_into().unwrap());
            let len = u16::from_le_bytes(key.get(pos + 4..pos + 6).ok_or_else(bad)?.try_into().unwrap()) as usize;
            pos += 6;
            let coeffs = key.get(pos..pos + len).ok_or_else(bad)?;
            pos += len;
            *x = LaurentPoly::from_coeffs(q, val, coeffs)?;
            if x.canonical_coeffs_differ(val, coeffs) {
                return Err(bad());
            }
        }
        if pos != key.len() {
            return Err(bad());
        }
        Self::from_entries(e)
    }
}

impl LaurentPoly {
    fn canonical_coeffs_differ(&self, val: i32, coeffs: &[u8]) -> bool {
        self.coeffs() != coeffs || (!self.is_zero() && self.valuation() != Some(val))
    }
}

fn det_of(rows: &[Vec<LaurentPoly>]) -> Result<LaurentPoly> {
    let n = rows.len();
    let q = rows[0][0].q();
    if n == 1 {
        return Ok(rows[0][0]);
    }
    let mut acc = LaurentPoly::zero(q);
    for j in 0..n {
        if rows[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<LaurentPoly>> = rows[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| *x).collect())
            .collect();
        let term = rows[0][j].mul(&det_of(&minor)?)?;
        acc = if j % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
    }
    Ok(acc)
}

/// Exact product; the determinant of the result is re-verified.
pub fn sl_mul<const N: usize>(a: &SlMatrix<N>, b: &SlMatrix<N>) -> Result<SlMatrix<N>> {
    let q = a.q();
    assert_eq!(q, b.q(), "mixed fields");
    let mut e = [[LaurentPoly::zero(q); N]; N];
    for (i, row) in e.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            for k in 0..N {
                *x = x.add(&a.e[i][k].mul(&b.e[k][j])?)?;
            }
        }
    }
    SlMatrix::from_entries(e)
}

impl SlMatrix<2> {
    /// `[[d, -b], [-c, a]]`.
    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.e;
        Self { e: [[d, b.neg()], [c.neg(), a]] }
    }
}

impl<const N: usize> fmt::Display for SlMatrix<N> {
    /// Rows separated by `;`, entries by `,`: `[1, t; 0, 1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.e.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
        }
        f.write_str("]")
    }
}

impl<const N: usize> fmt::Debug for SlMatrix<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn parse_matrix<const N: usize>(q: u8, s: &str) -> Result<SlMatrix<N>> {
    let bad = || Error::Parse(format!("bad matrix `{s}`"));
    let inner = s.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
    let rows: Vec<&str> = inner.split(';').collect();
    if rows.len() != N {
        return Err(bad());
    }
    let mut e = [[LaurentPoly::zero(q); N]; N];
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != N {
            return Err(bad());
        }
        for (j, cell) in cells.iter().enumerate() {
            e[i][j] = parse_laurent(q, cell)?;
        }
    }
    SlMatrix::from_entries(e)
}

/// Which off-diagonal slot an elementary generator fills.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Upper,
    Lower,
}

/// Cayley graph of `SL_2(F_q[t, t^{-1}])` for the generators
/// `E12(c t^k)`, `E21(c t^k)` with `c` in `F_q^*` and `k` in `{-1, 0, 1}`.
/// This set is closed under inverses.
#[derive(Clone, Debug)]
pub struct Sl2Oracle {
    q: u8,
    degree_bound: usize,
    gens: Vec<(Slot, u8, i32)>,
}

pub fn sl2_oracle(q: u8, degree_bound: usize) -> Result<Sl2Oracle> {
    if q != 2 && q != 3 {
        return Err(Error::InvalidQuery(format!("q must be 2 or 3, got {q}")));
    }
    if degree_bound == 0 || degree_bound >= capacity(q) {
        return Err(Error::InvalidQuery(format!(
            "degree bound must be in 1..={} for q = {q}",
            capacity(q) - 1
        )));
    }
    let mut gens = Vec::new();
    for slot in [Slot::Upper, Slot::Lower] {
        for k in -1..=1 {
            for c in 1..q {
                gens.push((slot, c, k));
            }
        }
    }
    Ok(Sl2Oracle { q, degree_bound, gens })
}

impl Sl2Oracle {
    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// The generators as matrices, in neighbor order.
    pub fn generators(&self) -> Vec<SlMatrix<2>> {
        self.gens
            .iter()
            .map(|&(slot, c, k)| {
                let x = LaurentPoly::monomial(self.q, c, k);
                match slot {
                    Slot::Upper => SlMatrix::elementary(self.q, 0, 1, x),
                    Slot::Lower => SlMatrix::elementary(self.q, 1, 0, x),
                }
            })
            .collect()
    }

    fn check_span(&self, m: &SlMatrix<2>) -> Result<()> {
        let span = m.max_span();
        if span > self.degree_bound {
            Err(Error::SpanBudget { span, bound: self.degree_bound })
        } else {
            Ok(())
        }
    }
}

impl GraphOracle for Sl2Oracle {
    type Vertex = SlMatrix<2>;

    fn name(&self) -> String {
        format!("sl2(q={},degree_bound={})", self.q, self.degree_bound)
    }

    fn basepoint(&self) -> SlMatrix<2> {
        SlMatrix::identity(self.q)
    }

    /// Right multiplication: `A E12(x)` adds `x` times column 0 to column 1,
    /// `A E21(x)` adds `x` times column 1 to column 0.
    fn neighbors(&self, v: &SlMatrix<2>, out: &mut Vec<SlMatrix<2>>) -> Result<()> {
        let [[a, b], [c, d]] = v.e;
        for &(slot, k_c, k) in &self.gens {
            let m = match slot {
                Slot::Upper => SlMatrix { e: [[a, a.mul_monomial(k_c, k).add(&b)?], [c, c.mul_monomial(k_c, k).add(&d)?]] },
                Slot::Lower => SlMatrix { e: [[a.add(&b.mul_monomial(k_c, k))?, b], [c.add(&d.mul_monomial(k_c, k))?, d]] },
            };
            self.check_span(&m)?;
            debug_assert!(m.det().map(|x| x.is_one()).unwrap_or(false), "det drift at {m}");
            out.push(m);
        }
        Ok(())
    }

    fn canonical_key(&self, v: &SlMatrix<2>) -> Vec<u8> {
        v.canonical_key()
    }

    fn render(&self, v: &SlMatrix<2>) -> String {
        v.to_string()
    }

    fn parse_vertex(&self, s: &str) -> Result<SlMatrix<2>> {
        let m = parse_matrix(self.q, s)?;
        self.check_span(&m)?;
        Ok(m)
    }

    fn vertex_transitive(&self) -> bool {
        true
    }

    /// Images under the automorphisms preserving the generating set, in a
    /// fixed order: every nonempty combination of `t -> t^{-1}`,
    /// conjugation by `[0, 1; -1, 0]` and, for `q = 3`, conjugation by
    /// `diag(1, -1)`. These involutions commute.
    fn basepoint_symmetries(&self, v: &SlMatrix<2>) -> Vec<SlMatrix<2>> {
        let involutions = if self.q == 3 { 3 } else { 2 };
        (1u32..1 << involutions)
            .map(|mask| {
                let mut m = *v;
                if mask & 1 != 0 {
                    m = m.map_entries(LaurentPoly::invert_variable);
                }
                if mask & 2 != 0 {
                    let [[a, b], [c, d]] = m.e;
                    m = SlMatrix { e: [[d, c.neg()], [b.neg(), a]] };
                }
                if mask & 4 != 0 {
                    let [[a, b], [c, d]] = m.e;
                    m = SlMatrix { e: [[a, b.neg()], [c.neg(), d]] };
                }
                m
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::divergence::bfs_ball;

    fn lp(q: u8, s: &str) -> LaurentPoly {
        parse_laurent(q, s).unwrap()
    }

    /// Independent schoolbook 2x2 product on coefficient maps.
    fn schoolbook(q: u8, a: &SlMatrix<2>, b: &SlMatrix<2>) -> Vec<Vec<std::collections::BTreeMap<i32, u32>>> {
        let mut out = vec![vec![std::collections::BTreeMap::new(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let (x, y) = (a.get(i, k), b.get(k, j));
                    for dx in x.valuation().unwrap_or(0)..=x.degree().unwrap_or(-1) {
                        for dy in y.valuation().unwrap_or(0)..=y.degree().unwrap_or(-1) {
                            *out[i][j].entry(dx + dy).or_insert(0) += x.coeff(dx) as u32 * y.coeff(dy) as u32;
                        }
                    }
                }
                out[i][j].retain(|_, v| {
                    *v %= q as u32;
                    *v != 0
                });
            }
        }
        out
    }

    fn as_maps(m: &SlMatrix<2>) -> Vec<Vec<std::collections::BTreeMap<i32, u32>>> {
        (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| {
                        let x = m.get(i, j);
                        let mut map = std::collections::BTreeMap::new();
                        if let (Some(lo), Some(hi)) = (x.valuation(), x.degree()) {
                            for d in lo..=hi {
                                if x.coeff(d) != 0 {
                                    map.insert(d, x.coeff(d) as u32);
                                }
                            }
                        }
                        map
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn product_examples() {
        let e12t = SlMatrix::<2>::elementary(2, 0, 1, lp(2, "t"));
        assert_eq!(sl_mul(&e12t, &e12t).unwrap(), SlMatrix::identity(2));
        let a = SlMatrix::<2>::elementary(2, 1, 0, lp(2, "t^-1"));
        assert_eq!(sl_mul(&a, &a.inverse()).unwrap(), SlMatrix::identity(2));
        let u = SlMatrix::<2>::elementary(2, 0, 1, LaurentPoly::one(2));
        let l = SlMatrix::<2>::elementary(2, 1, 0, LaurentPoly::one(2));
        let p = sl_mul(&u, &l).unwrap();
        assert_eq!(as_maps(&p), schoolbook(2, &u, &l));
        assert_eq!(p.to_string(), "[0, 1; 1, 1]");
    }

    #[test]
    fn det_violation_is_reported() {
        let one = LaurentPoly::one(2);
        let t = lp(2, "t");
        assert!(matches!(SlMatrix::<2>::from_entries([[t, one], [one, one]]), Err(Error::DetViolation(_))));
        let three = SlMatrix::<3>::elementary(3, 0, 2, lp(3, "2t"));
        assert_eq!(sl_mul(&three, &three).unwrap().get(0, 2).to_string(), "t");
    }

    #[test]
    fn identity_neighbors() {
        let o = sl2_oracle(2, DEFAULT_DEGREE_BOUND).unwrap();
        let mut out = Vec::new();
        o.neighbors(&o.basepoint(), &mut out).unwrap();
        assert_eq!(out.len(), 6);
        let keys: HashSet<Vec<u8>> = out.iter().map(|m| o.canonical_key(m)).collect();
        assert_eq!(keys.len(), 6);
        // generators and their inverses coincide in characteristic 2
        let with_inverses: HashSet<Vec<u8>> =
            o.generators().iter().flat_map(|g| [g.canonical_key(), g.inverse().canonical_key()]).collect();
        assert_eq!(with_inverses, keys);

        let o3 = sl2_oracle(3, DEFAULT_DEGREE_BOUND).unwrap();
        let mut out = Vec::new();
        o3.neighbors(&o3.basepoint(), &mut out).unwrap();
        assert_eq!(out.iter().map(|m| m.canonical_key()).collect::<HashSet<_>>().len(), 12);
        assert!(sl2_oracle(5, 24).is_err());
        assert!(sl2_oracle(3, 32).is_err());
    }

    #[test]
    fn ball_sizes_match_naive_matrix_bfs() {
        for q in [2u8, 3] {
            let o = sl2_oracle(q, DEFAULT_DEGREE_BOUND).unwrap();
            // naive: BFS by full matrix products with the generator list
            let gens = o.generators();
            let mut seen: HashSet<Vec<u8>> = HashSet::from([SlMatrix::<2>::identity(q).canonical_key()]);
            let mut layer = vec![SlMatrix::<2>::identity(q)];
            let mut sizes = vec![1usize];
            for _ in 0..3 {
                let mut next = Vec::new();
                for m in &layer {
                    for g in &gens {
                        let p = sl_mul(m, g).unwrap();
                        if seen.insert(p.canonical_key()) {
                            next.push(p);
                        }
                    }
                }
                sizes.push(seen.len());
                layer = next;
            }
            for (r, &size) in sizes.iter().enumerate() {
                assert_eq!(bfs_ball(&o, &o.basepoint(), r, usize::MAX).unwrap().len(), size, "q={q} r={r}");
            }
            if q == 2 {
                assert_eq!(sizes, vec![1, 7, 31, 114]);
            }
        }
    }

    #[test]
    fn span_budget_is_an_error() {
        let o = sl2_oracle(2, 2).unwrap();
        let err = bfs_ball(&o, &o.basepoint(), 6, usize::MAX).unwrap_err();
        assert!(matches!(err, Error::SpanBudget { bound: 2, .. }));
    }

    #[test]
    fn neighbors_are_symmetric_and_keys_round_trip() {
        for q in [2u8, 3] {
            let o = sl2_oracle(q, DEFAULT_DEGREE_BOUND).unwrap();
            let ball = bfs_ball(&o, &o.basepoint(), 3, usize::MAX).unwrap();
            for v in ball.vertices() {
                let mut out = Vec::new();
                o.neighbors(v, &mut out).unwrap();
                for w in &out {
                    let mut back = Vec::new();
                    o.neighbors(w, &mut back).unwrap();
                    assert!(back.contains(v));
                    assert_eq!(w.det().unwrap(), LaurentPoly::one(q));
                }
                assert_eq!(SlMatrix::<2>::from_canonical_key(q, &o.canonical_key(v)).unwrap(), *v);
                assert_eq!(o.parse_vertex(&o.render(v)).unwrap(), *v);
            }
        }
    }

    #[test]
    fn symmetries_preserve_the_generating_set() {
        for q in [2u8, 3] {
            let o = sl2_oracle(q, DEFAULT_DEGREE_BOUND).unwrap();
            let gens: HashSet<_> = o.generators().into_iter().collect();
            for g in &gens {
                let images = o.basepoint_symmetries(g);
                assert_eq!(images.len(), if q == 2 { 3 } else { 7 });
                assert!(images.iter().all(|m| gens.contains(m)));
            }
            // symmetries respect products, hence adjacency
            let a = SlMatrix::<2>::elementary(q, 0, 1, lp(q, "1+t"));
            let b = SlMatrix::<2>::elementary(q, 1, 0, lp(q, "t^-1"));
            let ab = sl_mul(&a, &b).unwrap();
            for ((ia, ib), iab) in
                o.basepoint_symmetries(&a).iter().zip(o.basepoint_symmetries(&b)).zip(o.basepoint_symmetries(&ab))
            {
                assert_eq!(sl_mul(ia, &ib).unwrap(), iab);
            }
        }
    }

    #[test]
    fn group_axioms_on_random_triples() {
        for q in [2u8, 3] {
            let o = sl2_oracle(q, DEFAULT_DEGREE_BOUND).unwrap();
            let gens = o.generators();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let random = |rng: &mut ChaCha8Rng| {
                let mut m = SlMatrix::<2>::identity(q);
                for _ in 0..rng.gen_range(0..8) {
                    m = sl_mul(&m, &gens[rng.gen_range(0..gens.len())]).unwrap();
                }
                m
            };
            for _ in 0..1000 {
                let (a, b, c) = (random(&mut rng), random(&mut rng), random(&mut rng));
                let left = sl_mul(&sl_mul(&a, &b).unwrap(), &c).unwrap();
                let right = sl_mul(&a, &sl_mul(&b, &c).unwrap()).unwrap();
                assert_eq!(left.canonical_key(), right.canonical_key());
                assert_eq!(sl_mul(&a, &a.inverse()).unwrap(), SlMatrix::identity(q));
            }
        }
    }
}
