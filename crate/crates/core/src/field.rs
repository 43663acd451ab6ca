//! Scalar regimes: exact rationals and double-precision complex numbers.
//!
//! Every algebraic type in the crate is generic over [`Field`]. Mixing the
//! two regimes requires an explicit conversion through [`Field::to_c64`] or
//! [`Field::from_c64`].

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::linalg::{DenseMatrix, Kernel};
use crate::{Error, Result};

pub type Q = BigRational;
pub type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Exact,
    Float,
}

impl Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Exact => f.write_str("exact"),
            Regime::Float => f.write_str("float"),
        }
    }
}

pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const REGIME: Regime;

    fn from_i64(n: i64) -> Self;

    fn from_rational(q: &Q) -> Self;

    /// `Some` only when the value is representable in this regime.
    fn from_c64(z: C64) -> Option<Self>;

    fn to_c64(&self) -> C64;

    /// Modulus as a double.
    fn abs_f64(&self) -> f64;

    /// Exact: `== 0`. Float: modulus at most `tol`.
    fn is_negligible(&self, tol: f64) -> bool;

    fn is_finite(&self) -> bool;

    /// A random "generic" value: small-height rationals or standard
    /// complex Gaussians.
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Null space of a dense matrix. `tol` is a relative singular value
    /// threshold in the floating regime and ignored in the exact one.
    fn kernel(m: &DenseMatrix<Self>, tol: f64) -> Kernel<Self>;

    /// Lossless text form: "n/d" for rationals, "re,im" for complex floats.
    fn to_text(&self) -> String;

    fn parse_text(s: &str) -> Result<Self>;

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    fn is_zero_tol(&self, tol: f64) -> bool {
        self.is_negligible(tol)
    }

    /// Image in `Z/pZ`; `None` for floats or when `p` divides the
    /// denominator.
    fn residue(&self, _p: u64) -> Option<u64> {
        None
    }
}

impl Field for Q {
    fn residue(&self, p: u64) -> Option<u64> {
        let m = BigInt::from(p);
        let to_u64 = |x: &BigInt| -> u64 { x.mod_floor(&m).try_into().expect("reduced below p") };
        let den = to_u64(self.denom());
        (den != 0).then(|| crate::linalg::mul_mod(to_u64(self.numer()), crate::linalg::inv_mod(den, p), p))
    }

    const REGIME: Regime = Regime::Exact;

    fn from_i64(n: i64) -> Self {
        Q::from_integer(BigInt::from(n))
    }

    fn from_rational(q: &Q) -> Self {
        q.clone()
    }

    fn from_c64(_z: C64) -> Option<Self> {
        None
    }

    fn to_c64(&self) -> C64 {
        C64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn abs_f64(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn is_finite(&self) -> bool {
        true
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let num: i64 = rng.random_range(-40..=40);
        let den: i64 = rng.random_range(1..=17);
        Q::new(BigInt::from(num), BigInt::from(den))
    }

    fn kernel(m: &DenseMatrix<Self>, _tol: f64) -> Kernel<Self> {
        crate::linalg::exact_kernel(m)
    }

    fn to_text(&self) -> String {
        self.to_string()
    }

    fn parse_text(s: &str) -> Result<Self> {
        let t = s.trim();
        let q: Q = t
            .parse()
            .map_err(|_| Error::Parse(format!("not a rational number: {t:?}")))?;
        if q.denom().is_zero() {
            return Err(Error::Parse(format!("zero denominator: {t:?}")));
        }
        Ok(q)
    }
}

impl Field for C64 {
    const REGIME: Regime = Regime::Float;

    fn from_i64(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }

    fn from_rational(q: &Q) -> Self {
        C64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn from_c64(z: C64) -> Option<Self> {
        Some(z)
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn abs_f64(&self) -> f64 {
        self.norm()
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    }

    fn kernel(m: &DenseMatrix<Self>, tol: f64) -> Kernel<Self> {
        crate::linalg::svd_kernel(m, tol)
    }

    fn to_text(&self) -> String {
        format!("{:?},{:?}", self.re, self.im)
    }

    fn parse_text(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a complex number \"re,im\": {s:?}"));
        let mut parts = s.split(',');
        let re: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let im: f64 = match parts.next() {
            Some(t) => t.trim().parse().map_err(|_| bad())?,
            None => 0.0,
        };
        if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
            return Err(bad());
        }
        Ok(C64::new(re, im))
    }
}

/// Regime-tagged scalar for dynamically typed boundaries (files, bindings).
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Q),
    Float(C64),
}

impl Scalar {
    pub fn regime(&self) -> Regime {
        match self {
            Scalar::Exact(_) => Regime::Exact,
            Scalar::Float(_) => Regime::Float,
        }
    }

    pub fn to_c64(&self) -> C64 {
        match self {
            Scalar::Exact(q) => q.to_c64(),
            Scalar::Float(z) => *z,
        }
    }

    /// Checked constructor: floats must be finite.
    pub fn float(z: C64) -> Result<Self> {
        if z.is_finite() {
            Ok(Scalar::Float(z))
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a + b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::float(a + b),
            _ => Err(Error::RegimeMismatch),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a * b)),
            (Scalar::Float(a), Scalar::Float(b)) => Scalar::float(a * b),
            _ => Err(Error::RegimeMismatch),
        }
    }
}

impl Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Float(z) => write!(f, "{z}"),
        }
    }
}

/// Best rational approximation with denominator at most `max_den`, by
/// continued fractions.
pub fn rationalize(x: f64, max_den: u64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = rest - a;
        if frac.abs() < 1e-15 {
            break;
        }
        rest = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    Some(Q::new(BigInt::from(h1), BigInt::from(k1)))
}

/// Relative comparison helper for tests and checks.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(0.75, 1000), Some(Q::new(3.into(), 4.into())));
        assert_eq!(rationalize(-2.0 / 7.0, 1000), Some(Q::new((-2).into(), 7.into())));
        assert_eq!(rationalize(5.0, 10), Some(Q::from_integer(5.into())));
    }

    #[test]
    fn scalar_regimes_do_not_mix() {
        let a = Scalar::Exact(Q::from_i64(2));
        let b = Scalar::Float(C64::new(1.0, 0.0));
        assert!(matches!(a.add(&b), Err(Error::RegimeMismatch)));
        assert_eq!(a.mul(&a).unwrap(), Scalar::Exact(Q::from_i64(4)));
        assert!(Scalar::float(C64::new(f64::NAN, 0.0)).is_err());
    }
}
