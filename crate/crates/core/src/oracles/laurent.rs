//! Laurent polynomials over F_2 and F_3, packed into one machine word.
//!
//! Coefficient `i` (of `t^(val + i)`) occupies bit `i` for `q = 2` and the
//! two bits `2i, 2i + 1` for `q = 3`, so a polynomial holds at most 64 or
//! 32 coefficients. Arithmetic that would exceed this fails with
//! `SpanBudget` instead of truncating.

use std::fmt;

use crate::error::{Error, Result};

const LOW_LANES: u64 = 0x5555_5555_5555_5555;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    bits: u64,
    val: i32,
    len: u8,
    q: u8,
}

fn check_q(q: u8) {
    assert!(q == 2 || q == 3, "only F_2 and F_3 are supported, got q = {q}");
}

fn width(q: u8) -> u32 {
    if q == 2 {
        1
    } else {
        2
    }
}

/// Maximum number of coefficients for the field size.
pub fn capacity(q: u8) -> usize {
    64 / width(q) as usize
}

fn lane_mask(q: u8) -> u64 {
    if q == 2 {
        1
    } else {
        3
    }
}

impl LaurentPoly {
    pub fn zero(q: u8) -> Self {
        check_q(q);
        Self { bits: 0, val: 0, len: 0, q }
    }

    pub fn one(q: u8) -> Self {
        Self::monomial(q, 1, 0)
    }

    /// `c t^k`, with `c` reduced mod `q`.
    pub fn monomial(q: u8, c: u8, k: i32) -> Self {
        check_q(q);
        let c = c % q;
        if c == 0 {
            return Self::zero(q);
        }
        Self { bits: c as u64, val: k, len: 1, q }
    }

    /// Polynomial `sum coeffs[i] t^(val + i)`; coefficients are reduced mod `q`.
    pub fn from_coeffs(q: u8, val: i32, coeffs: &[u8]) -> Result<Self> {
        check_q(q);
        let mut p = Self::zero(q);
        for (i, &c) in coeffs.iter().enumerate() {
            p = p.add(&Self::monomial(q, c, val + i as i32))?;
        }
        Ok(p)
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn is_zero(&self) -> bool {
        self.len == 0
    }

    pub fn is_one(&self) -> bool {
        self.len == 1 && self.val == 0 && self.bits == 1
    }

    /// Lowest exponent, `None` for zero.
    pub fn valuation(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Highest exponent, `None` for zero.
    pub fn degree(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.val + self.len as i32 - 1)
    }

    /// `degree - valuation`; zero for constants and for the zero polynomial.
    pub fn span(&self) -> usize {
        (self.len as usize).saturating_sub(1)
    }

    /// Number of stored coefficients (`span + 1`, or 0 for zero).
    pub fn num_coeffs(&self) -> usize {
        self.len as usize
    }

    fn lane(&self, i: usize) -> u8 {
        ((self.bits >> (i as u32 * width(self.q))) & lane_mask(self.q)) as u8
    }

    /// Coefficients from the valuation upwards.
    pub fn coeffs(&self) -> Vec<u8> {
        (0..self.len as usize).map(|i| self.lane(i)).collect()
    }

    /// Coefficient of `t^k`.
    pub fn coeff(&self, k: i32) -> u8 {
        let i = k as i64 - self.val as i64;
        if self.is_zero() || i < 0 || i >= self.len as i64 {
            0
        } else {
            self.lane(i as usize)
        }
    }

    fn normalized(q: u8, bits: u64, val: i32) -> Self {
        if bits == 0 {
            return Self::zero(q);
        }
        let w = width(q);
        let tz = bits.trailing_zeros() / w;
        let bits = bits >> (tz * w);
        let used = 64 - bits.leading_zeros();
        Self { bits, val: val + tz as i32, len: used.div_ceil(w) as u8, q }
    }

    fn overflow(q: u8, span: i64) -> Error {
        Error::SpanBudget { span: span as usize, bound: capacity(q) - 1 }
    }

    /// Both operands shifted onto a common valuation.
    fn aligned(&self, other: &Self) -> Result<(u64, u64, i32)> {
        debug_assert_eq!(self.q, other.q);
        if self.is_zero() {
            return Ok((0, other.bits, other.val));
        }
        if other.is_zero() {
            return Ok((self.bits, 0, self.val));
        }
        let lo = self.val.min(other.val);
        let hi = (self.val + self.len as i32).max(other.val + other.len as i32);
        let span = hi as i64 - lo as i64;
        if span > capacity(self.q) as i64 {
            return Err(Self::overflow(self.q, span - 1));
        }
        let w = width(self.q);
        let a = self.bits << ((self.val - lo) as u32 * w);
        let b = other.bits << ((other.val - lo) as u32 * w);
        Ok((a, b, lo))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (a, b, lo) = self.aligned(other)?;
        let bits = if self.q == 2 { a ^ b } else { add_f3(a, b) };
        Ok(Self::normalized(self.q, bits, lo))
    }

    pub fn neg(&self) -> Self {
        self.scale(self.q - 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Multiply by the constant `c`.
    pub fn scale(&self, c: u8) -> Self {
        match c % self.q {
            0 => Self::zero(self.q),
            1 => *self,
            _ => Self { bits: neg_f3(self.bits), ..*self },
        }
    }

    /// Multiply by `c t^k`.
    pub fn mul_monomial(&self, c: u8, k: i32) -> Self {
        let mut p = self.scale(c);
        if !p.is_zero() {
            p.val += k;
        }
        p
    }

    /// The image under the ring automorphism `t -> t^{-1}`.
    pub fn invert_variable(&self) -> Self {
        if self.is_zero() {
            return *self;
        }
        let w = width(self.q);
        let mut bits = 0u64;
        for i in 0..self.len as usize {
            bits |= (self.lane(i) as u64) << ((self.len as usize - 1 - i) as u32 * w);
        }
        Self { bits, val: -(self.degree().unwrap()), len: self.len, q: self.q }
    }

    /// Exact product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        laurent_mul(self, other)
    }
}

fn add_f3(a: u64, b: u64) -> u64 {
    let mut out = 0u64;
    for i in 0..32 {
        let s = ((a >> (2 * i)) & 3) + ((b >> (2 * i)) & 3);
        out |= (s % 3) << (2 * i);
    }
    out
}

/// Swaps the lane values 1 and 2.
fn neg_f3(bits: u64) -> u64 {
    ((bits & LOW_LANES) << 1) | ((bits >> 1) & LOW_LANES)
}

pub fn laurent_mul(p: &LaurentPoly, r: &LaurentPoly) -> Result<LaurentPoly> {
    assert_eq!(p.q, r.q, "mixed fields");
    let q = p.q;
    if p.is_zero() || r.is_zero() {
        return Ok(LaurentPoly::zero(q));
    }
    let len = p.len as usize + r.len as usize - 1;
    if len > capacity(q) {
        return Err(LaurentPoly::overflow(q, len as i64 - 1));
    }
    let val = p.val + r.val;
    if q == 2 {
        let mut acc = 0u64;
        let mut a = p.bits;
        while a != 0 {
            let i = a.trailing_zeros();
            acc ^= r.bits << i;
            a &= a - 1;
        }
        return Ok(LaurentPoly::normalized(q, acc, val));
    }
    let mut digits = vec![0u32; len];
    for i in 0..p.len as usize {
        let x = p.lane(i) as u32;
        if x == 0 {
            continue;
        }
        for j in 0..r.len as usize {
            digits[i + j] += x * r.lane(j) as u32;
        }
    }
    let bits = digits.iter().enumerate().fold(0u64, |acc, (i, &d)| acc | (((d % 3) as u64) << (2 * i)));
    Ok(LaurentPoly::normalized(q, bits, val))
}

impl fmt::Display for LaurentPoly {
    /// Terms in increasing degree, e.g. `t^-1+1+t` or `2t^-2+t^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for i in 0..self.len as usize {
            let c = self.lane(i);
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            let k = self.val + i as i32;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (_, 1) => {}
                (_, c) => write!(f, "{c}")?,
            }
            match k {
                0 => {}
                1 => f.write_str("t")?,
                k => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.q)
    }
}

/// Parses the rendered form, e.g. `t^-1+1+t`. Terms may repeat degrees.
pub fn parse_laurent(q: u8, s: &str) -> Result<LaurentPoly> {
    check_q(q);
    let bad = || Error::Parse(format!("bad Laurent polynomial `{s}`"));
    let s = s.trim();
    if s == "0" {
        return Ok(LaurentPoly::zero(q));
    }
    let mut p = LaurentPoly::zero(q);
    for term in s.split('+') {
        let term = term.trim();
        let digits_end = term.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(term.len());
        let (coef, rest) = term.split_at(digits_end);
        let c: u8 = if coef.is_empty() { 1 } else { coef.parse().map_err(|_| bad())? };
        let k: i32 = if rest.is_empty() {
            if coef.is_empty() {
                return Err(bad());
            }
            0
        } else {
            let rest = rest.strip_prefix('t').ok_or_else(bad)?;
            if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
            }
        };
        if c as u32 >= q as u32 || c == 0 {
            return Err(bad());
        }
        p = p.add(&LaurentPoly::monomial(q, c, k))?;
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    /// Naive model: coefficient vectors indexed from a fixed offset.
    fn dense(p: &LaurentPoly) -> Vec<(i32, u8)> {
        p.coeffs()
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(|(i, c)| (p.valuation().unwrap() + i as i32, c))
            .collect()
    }

    fn naive_mul(q: u8, a: &[(i32, u8)], b: &[(i32, u8)]) -> Vec<(i32, u8)> {
        let mut m = std::collections::BTreeMap::new();
        for &(i, x) in a {
            for &(j, y) in b {
                *m.entry(i + j).or_insert(0u32) += x as u32 * y as u32;
            }
        }
        m.into_iter().filter_map(|(k, v)| ((v % q as u32) != 0).then_some((k, (v % q as u32) as u8))).collect()
    }

    /// Spans stay small enough that sums of products fit the F_3 capacity.
    fn poly(q: u8) -> impl Strategy<Value = LaurentPoly> {
        (-4i32..4, proptest::collection::vec(0..q, 0..9)).prop_map(move |(v, c)| LaurentPoly::from_coeffs(q, v, &c).unwrap())
    }

    #[test]
    fn examples() {
        let p = parse_laurent(2, "t+1").unwrap();
        let r = parse_laurent(2, "t^-1+1").unwrap();
        assert_eq!(laurent_mul(&p, &r).unwrap().to_string(), "t^-1+t");
        let z = LaurentPoly::zero(2);
        assert!(laurent_mul(&p, &z).unwrap().is_zero());
        assert_eq!(laurent_mul(&p, &LaurentPoly::one(2)).unwrap(), p);
        assert_eq!(parse_laurent(3, "2t^-2+t^3").unwrap().to_string(), "2t^-2+t^3");
        assert_eq!(parse_laurent(3, "2+2").unwrap().to_string(), "1");
        assert!(parse_laurent(2, "2t").is_err());
        assert!(parse_laurent(2, "x").is_err());
    }

    #[test]
    fn capacity_is_enforced() {
        let a = LaurentPoly::from_coeffs(2, 0, &[1; 40]).unwrap();
        assert!(matches!(laurent_mul(&a, &a), Err(Error::SpanBudget { .. })));
        let b = LaurentPoly::monomial(3, 1, 0);
        assert!(b.add(&LaurentPoly::monomial(3, 1, 32)).is_err());
        assert!(b.add(&LaurentPoly::monomial(3, 1, 31)).is_ok());
    }

    proptest! {
        #[test]
        fn ring_laws_f2(a in poly(2), b in poly(2), c in poly(2)) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab, b.mul(&a).unwrap());
            prop_assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), ab.add(&a.mul(&c).unwrap()).unwrap());
            prop_assert!(a.add(&a).unwrap().is_zero());
            prop_assert_eq!(dense(&ab), naive_mul(2, &dense(&a), &dense(&b)));
        }

        #[test]
        fn ring_laws_f3(a in poly(3), b in poly(3), c in poly(3)) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab, b.mul(&a).unwrap());
            prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), ab.add(&a.mul(&c).unwrap()).unwrap());
            prop_assert!(a.sub(&a).unwrap().is_zero());
            prop_assert_eq!(dense(&ab), naive_mul(3, &dense(&a), &dense(&b)));
            prop_assert_eq!(a.invert_variable().invert_variable(), a);
            prop_assert_eq!(a.mul(&b).unwrap().invert_variable(), a.invert_variable().mul(&b.invert_variable()).unwrap());
        }

        #[test]
        fn render_round_trips(q in 2u8..4, v in -6i32..6, c in proptest::collection::vec(0u8..3, 0..10)) {
            let c: Vec<u8> = c.into_iter().map(|x| x % q).collect();
            let p = LaurentPoly::from_coeffs(q, v, &c).unwrap();
            prop_assert_eq!(parse_laurent(q, &p.to_string()).unwrap(), p);
        }
    }
}
