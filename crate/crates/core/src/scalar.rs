//! Exact arithmetic in the real biquadratic field Q(sqrt2, sqrt3).
//!
//! Every value is `a + b*sqrt2 + c*sqrt3 + d*sqrt6` with rational
//! coefficients. This is the smallest field containing `cos(pi/m)` for
//! `m in {2, 3, 4, 6}`, which is all the Coxeter labels we support.
//! Signs are decided exactly by squaring, never through floating point.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadExtScalar {
    /// Coefficients of `1, sqrt2, sqrt3, sqrt6`.
    coeffs: [BigRational; 4],
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn q_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Sign of `x + y*sqrt(k)` for a positive non-square integer `k`.
fn sign_sqrt(x: &BigRational, y: &BigRational, k: i64) -> Ordering {
    let sx = x.cmp(&BigRational::zero());
    let sy = y.cmp(&BigRational::zero());
    if sy == Ordering::Equal {
        return sx;
    }
    if sx == Ordering::Equal || sx == sy {
        return sy;
    }
    // Opposite signs: the larger magnitude wins.
    let lhs = x * x;
    let rhs = y * y * q(k);
    match lhs.cmp(&rhs) {
        Ordering::Greater => sx,
        Ordering::Less => sy,
        Ordering::Equal => Ordering::Equal,
    }
}

/// An element `x + y*sqrt2` of Q(sqrt2), used while deciding signs.
#[derive(Clone)]
struct Sqrt2Num(BigRational, BigRational);

impl Sqrt2Num {
    fn sign(&self) -> Ordering {
        sign_sqrt(&self.0, &self.1, 2)
    }

    fn square(&self) -> Sqrt2Num {
        let two = q(2);
        Sqrt2Num(
            &self.0 * &self.0 + &self.1 * &self.1 * &two,
            &self.0 * &self.1 * &two,
        )
    }

    fn sub(&self, other: &Sqrt2Num) -> Sqrt2Num {
        Sqrt2Num(&self.0 - &other.0, &self.1 - &other.1)
    }

    fn scale(&self, k: i64) -> Sqrt2Num {
        Sqrt2Num(&self.0 * q(k), &self.1 * q(k))
    }
}

impl QuadExtScalar {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Self { coeffs: [a, b, c, d] }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(q(n))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::new(r, BigRational::zero(), BigRational::zero(), BigRational::zero())
    }

    pub fn sqrt2() -> Self {
        Self::new(BigRational::zero(), BigRational::one(), BigRational::zero(), BigRational::zero())
    }

    pub fn sqrt3() -> Self {
        Self::new(BigRational::zero(), BigRational::zero(), BigRational::one(), BigRational::zero())
    }

    /// `cos(pi/m)` for the supported labels; `None` for anything else.
    ///
    /// `m = 1` gives `cos(pi) = -1`.
    pub fn cos_pi_over(m: u32) -> Option<Self> {
        let z = BigRational::zero;
        match m {
            1 => Some(Self::from_int(-1)),
            2 => Some(Self::zero()),
            3 => Some(Self::from_rational(q_frac(1, 2))),
            4 => Some(Self::new(z(), q_frac(1, 2), z(), z())),
            6 => Some(Self::new(z(), z(), q_frac(1, 2), z())),
            _ => None,
        }
    }

    pub fn coeffs(&self) -> &[BigRational; 4] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Exact sign: `Less` for negative, `Equal` for zero, `Greater` for positive.
    pub fn signum(&self) -> Ordering {
        let [a, b, c, d] = &self.coeffs;
        // value = P + sqrt3 * Q with P = a + b*sqrt2, Q = c + d*sqrt2
        let p = Sqrt2Num(a.clone(), b.clone());
        let qq = Sqrt2Num(c.clone(), d.clone());
        let sp = p.sign();
        let sq = qq.sign();
        if sq == Ordering::Equal {
            return sp;
        }
        if sp == Ordering::Equal || sp == sq {
            return sq;
        }
        // Opposite signs: compare P^2 against 3 Q^2 inside Q(sqrt2).
        match p.square().sub(&qq.square().scale(3)).sign() {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Floating point approximation, for display only.
    pub fn to_f64(&self) -> f64 {
        let f = |r: &BigRational| {
            let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
            let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
            n / d
        };
        f(&self.coeffs[0])
            + f(&self.coeffs[1]) * 2f64.sqrt()
            + f(&self.coeffs[2]) * 3f64.sqrt()
            + f(&self.coeffs[3]) * 6f64.sqrt()
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let k = q(k);
        Self { coeffs: self.coeffs.clone().map(|c| c * &k) }
    }
}

impl PartialOrd for QuadExtScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadExtScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl<'a> Add<&'a QuadExtScalar> for &'a QuadExtScalar {
    type Output = QuadExtScalar;
    fn add(self, rhs: &QuadExtScalar) -> QuadExtScalar {
        let [a, b, c, d] = &self.coeffs;
        let [e, f, g, h] = &rhs.coeffs;
        QuadExtScalar::new(a + e, b + f, c + g, d + h)
    }
}

impl<'a> Sub<&'a QuadExtScalar> for &'a QuadExtScalar {
    type Output = QuadExtScalar;
    fn sub(self, rhs: &QuadExtScalar) -> QuadExtScalar {
        let [a, b, c, d] = &self.coeffs;
        let [e, f, g, h] = &rhs.coeffs;
        QuadExtScalar::new(a - e, b - f, c - g, d - h)
    }
}

impl<'a> Mul<&'a QuadExtScalar> for &'a QuadExtScalar {
    type Output = QuadExtScalar;
    fn mul(self, rhs: &QuadExtScalar) -> QuadExtScalar {
        // basis products: s2*s2 = 2, s3*s3 = 3, s6*s6 = 6,
        // s2*s3 = s6, s2*s6 = 2 s3, s3*s6 = 3 s2
        let [a, b, c, d] = &self.coeffs;
        let [e, f, g, h] = &rhs.coeffs;
        let two = q(2);
        let three = q(3);
        let six = q(6);
        let one_part = a * e + b * f * &two + c * g * &three + d * h * &six;
        let s2_part = a * f + b * e + (c * h + d * g) * &three;
        let s3_part = a * g + c * e + (b * h + d * f) * &two;
        let s6_part = a * h + d * e + b * g + c * f;
        QuadExtScalar::new(one_part, s2_part, s3_part, s6_part)
    }
}

impl Neg for &QuadExtScalar {
    type Output = QuadExtScalar;
    fn neg(self) -> QuadExtScalar {
        QuadExtScalar { coeffs: self.coeffs.clone().map(|c| -c) }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QuadExtScalar> for QuadExtScalar {
            type Output = QuadExtScalar;
            fn $m(self, rhs: QuadExtScalar) -> QuadExtScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QuadExtScalar {
    type Output = QuadExtScalar;
    fn neg(self) -> QuadExtScalar {
        -&self
    }
}

impl fmt::Display for QuadExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["", "sqrt2", "sqrt3", "sqrt6"];
        let mut first = true;
        for (c, name) in self.coeffs.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (name.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => write!(f, "{name}")?,
                (false, false) => write!(f, "{mag}*{name}")?,
            }
        }
        Ok(())
    }
}
