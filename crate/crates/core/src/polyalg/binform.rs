//! Binary forms `Σ c_i a0^(d-i) a1^i` and points `[a0:a1]` of the
//! projective line. The affine chart is `a = a1/a0`, so `[0:1]` is the
//! point at infinity and the form restricts to `Σ c_i a^i`.

use std::fmt;

use crate::field::{Field, C64};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct P1Point<K> {
    coords: [K; 2],
}

impl<K: Field> P1Point<K> {
    pub fn new(a0: K, a1: K) -> Result<Self> {
        if !a0.is_finite() || !a1.is_finite() {
            return Err(Error::NonFinite);
        }
        let norm = a0.abs_f64().hypot(a1.abs_f64());
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        let floor = match K::REGIME {
            crate::field::Regime::Exact => 0.0,
            crate::field::Regime::Float => 1e-15 * norm,
        };
        if a0.is_negligible(floor) {
            Ok(Self { coords: [K::zero(), K::one()] })
        } else {
            Ok(Self { coords: [K::one(), a1 / a0] })
        }
    }

    pub fn affine(a: K) -> Self {
        Self { coords: [K::one(), a] }
    }

    pub fn infinity() -> Self {
        Self { coords: [K::zero(), K::one()] }
    }

    pub fn coords(&self) -> &[K; 2] {
        &self.coords
    }

    pub fn is_infinity(&self) -> bool {
        self.coords[0].is_negligible(0.0)
    }

    /// The affine coordinate, `None` at infinity.
    pub fn value(&self) -> Option<&K> {
        (!self.is_infinity()).then_some(&self.coords[1])
    }

    pub fn to_c64(&self) -> P1Point<C64> {
        P1Point {
            coords: [self.coords[0].to_c64(), self.coords[1].to_c64()],
        }
    }

    /// Chordal distance: `|a0 b1 - a1 b0| / (|a| |b|)`.
    pub fn distance(&self, other: &Self) -> f64 {
        let a = self.to_c64().coords;
        let b = other.to_c64().coords;
        let num = (a[0] * b[1] - a[1] * b[0]).norm();
        num / ((a[0].norm().hypot(a[1].norm())) * (b[0].norm().hypot(b[1].norm())))
    }

    pub fn same(&self, other: &Self, tol: f64) -> bool {
        match K::REGIME {
            crate::field::Regime::Exact => self.coords == other.coords,
            crate::field::Regime::Float => self.distance(other) <= tol,
        }
    }

    /// The linear form vanishing exactly at this point: `p1 a0 - p0 a1`.
    pub fn vanishing_form(&self) -> BinForm<K> {
        BinForm::from_coeffs(vec![self.coords[1].clone(), -self.coords[0].clone()])
    }
}

impl<K: Field + fmt::Display> fmt::Display for P1Point<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.coords[1])
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BinForm<K> {
    coeffs: Vec<K>,
}

impl<K: Field> BinForm<K> {
    pub fn zero(degree: u32) -> Self {
        Self {
            coeffs: vec![K::zero(); degree as usize + 1],
        }
    }

    pub fn constant(c: K) -> Self {
        Self { coeffs: vec![c] }
    }

    /// Coefficients `c_0..c_d` of `a0^(d-i) a1^i`; the degree is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<K>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| K::from_i64(c)).collect())
    }

    /// `c * a0^(d-i) * a1^i`.
    pub fn monomial(degree: u32, i: u32, c: K) -> Self {
        let mut f = Self::zero(degree);
        f.coeffs[i as usize] = c;
        f
    }

    /// `a0` (for `which == 0`) or `a1`.
    pub fn var(which: usize) -> Self {
        Self::monomial(1, which as u32, K::one())
    }

    /// Homogenizes an affine polynomial `Σ c_i a^i` to the given degree.
    pub fn homogenize(affine: &[K], degree: u32) -> Result<Self> {
        let mut c = affine.to_vec();
        while c.len() > degree as usize + 1 {
            if !c.last().unwrap().is_negligible(0.0) {
                return Err(Error::DegreeMismatch(format!(
                    "affine polynomial of degree {} exceeds {degree}",
                    c.len() - 1
                )));
            }
            c.pop();
        }
        c.resize(degree as usize + 1, K::zero());
        Ok(Self { coeffs: c })
    }

    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible(0.0))
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs_f64().powi(2)).sum::<f64>().sqrt()
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> BinForm<L> {
        BinForm {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_c64(&self) -> BinForm<C64> {
        self.map(|c| c.to_c64())
    }

    pub fn scale(&self, s: &K) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(format!(
                "adding binary forms of degree {} and {}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-K::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![K::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_negligible(0.0) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(K::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn evaluate(&self, p: &[K; 2]) -> K {
        let d = self.degree() as usize;
        let mut pw0 = vec![K::one()];
        let mut pw1 = vec![K::one()];
        for k in 0..d {
            pw0.push(pw0[k].clone() * p[0].clone());
            pw1.push(pw1[k].clone() * p[1].clone());
        }
        self.coeffs
            .iter()
            .enumerate()
            .fold(K::zero(), |acc, (i, c)| acc + c.clone() * pw0[d - i].clone() * pw1[i].clone())
    }

    pub fn evaluate_at(&self, p: &P1Point<K>) -> K {
        self.evaluate(p.coords())
    }

    /// Derivative with respect to `a0` (`which == 0`) or `a1`.
    pub fn derivative(&self, which: usize) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        let mut out = vec![K::zero(); d as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let (e0, e1) = (d as usize - i, i);
            match which {
                0 if e0 > 0 => out[i] = c.clone() * K::from_i64(e0 as i64),
                1 if e1 > 0 => out[i - 1] = c.clone() * K::from_i64(e1 as i64),
                _ => {}
            }
        }
        Self { coeffs: out }
    }

    /// Multiplicity of the root at infinity (the power of `a0` dividing the
    /// form), with float coefficients judged against `floor`.
    pub fn infinity_order(&self, floor: f64) -> u32 {
        self.coeffs.iter().rev().take_while(|c| c.is_negligible(floor)).count() as u32
    }

    /// Affine polynomial `Σ c_i a^i` with trailing negligible terms removed.
    pub fn affine_part(&self, floor: f64) -> Vec<K> {
        let k = self.infinity_order(floor) as usize;
        self.coeffs[..self.coeffs.len() - k].to_vec()
    }

    /// Exact division by another form; `None` if it does not divide.
    pub fn divide_exact(&self, divisor: &Self) -> Option<Self> {
        let e = self.degree().checked_sub(divisor.degree())?;
        let dv = &divisor.coeffs;
        let lead = dv.iter().position(|c| !c.is_negligible(0.0))?;
        let mut work = self.coeffs.clone();
        let mut q = vec![K::zero(); e as usize + 1];
        for i in 0..=e as usize {
            let c = work[i + lead].clone();
            if c.is_negligible(0.0) {
                continue;
            }
            let t = c / dv[lead].clone();
            for (j, dc) in dv.iter().enumerate() {
                work[i + j] = work[i + j].clone() - t.clone() * dc.clone();
            }
            q[i] = t;
        }
        let floor = match K::REGIME {
            crate::field::Regime::Exact => 0.0,
            crate::field::Regime::Float => 1e-10 * self.norm(),
        };
        work.iter()
            .all(|c| c.is_negligible(floor))
            .then_some(Self { coeffs: q })
    }

    /// Greatest common divisor (defined up to scale). Uses Euclid on the
    /// affine parts; meaningful in the exact regime.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let inf = self.infinity_order(0.0).min(other.infinity_order(0.0));
        let g = poly_gcd(&self.affine_part(0.0), &other.affine_part(0.0));
        let deg = (g.len() - 1) as u32 + inf;
        Self::homogenize(&g, deg).expect("degree fits")
    }

    /// Square-free decomposition `self = c Π f_k^k` (Yun), exact regime.
    pub fn square_free_parts(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        let inf = self.infinity_order(0.0);
        if inf > 0 {
            out.push((BinForm::var(0), inf));
        }
        let f = self.affine_part(0.0);
        for (k, part) in yun(&f) {
            if part.len() > 1 {
                let deg = (part.len() - 1) as u32;
                out.push((Self::homogenize(&part, deg).expect("degree fits"), k));
            }
        }
        out
    }
}

impl<K: Field + fmt::Display> fmt::Display for BinForm<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree() as usize;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_negligible(0.0) {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})*a0^{}*a1^{i}", d - i)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

// Univariate helpers on coefficient vectors, lowest degree first.

fn trim<K: Field>(mut p: Vec<K>) -> Vec<K> {
    while p.len() > 1 && p.last().unwrap().is_negligible(0.0) {
        p.pop();
    }
    p
}

fn poly_rem<K: Field>(a: &[K], b: &[K]) -> Vec<K> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_negligible(0.0)) {
        let shift = r.len() - b.len();
        let t = r.last().unwrap().clone() / lb.clone();
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] = r[shift + j].clone() - t.clone() * bc.clone();
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(K::zero());
        }
    }
    r
}

pub(crate) fn poly_divexact<K: Field>(a: &[K], b: &[K]) -> Vec<K> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return vec![K::zero()];
    }
    let mut q = vec![K::zero(); r.len() - b.len() + 1];
    let lb = b.last().unwrap().clone();
    for s in (0..q.len()).rev() {
        let t = r[s + b.len() - 1].clone() / lb.clone();
        for (j, bc) in b.iter().enumerate() {
            r[s + j] = r[s + j].clone() - t.clone() * bc.clone();
        }
        q[s] = t;
    }
    q
}

fn monic<K: Field>(p: Vec<K>) -> Vec<K> {
    let p = trim(p);
    let l = p.last().unwrap().clone();
    if l.is_negligible(0.0) {
        return p;
    }
    p.into_iter().map(|c| c / l.clone()).collect()
}

pub(crate) fn poly_gcd<K: Field>(a: &[K], b: &[K]) -> Vec<K> {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !(y.len() == 1 && y[0].is_negligible(0.0)) {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    monic(x)
}

pub(crate) fn poly_derivative<K: Field>(p: &[K]) -> Vec<K> {
    if p.len() <= 1 {
        return vec![K::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.clone() * K::from_i64(i as i64))
        .collect()
}

fn poly_sub<K: Field>(a: &[K], b: &[K]) -> Vec<K> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(K::zero);
            let y = b.get(i).cloned().unwrap_or_else(K::zero);
            x - y
        })
        .collect();
    trim(out)
}

/// Yun's square-free factorization of a univariate polynomial over a field
/// of characteristic zero. Returns `(multiplicity, factor)` pairs.
fn yun<K: Field>(f: &[K]) -> Vec<(u32, Vec<K>)> {
    let f = trim(f.to_vec());
    if f.len() <= 1 {
        return Vec::new();
    }
    let fp = poly_derivative(&f);
    let a0 = poly_gcd(&f, &fp);
    let mut b = poly_divexact(&f, &a0);
    let c = poly_divexact(&fp, &a0);
    let mut d = poly_sub(&c, &poly_derivative(&b));
    let mut out = Vec::new();
    let mut k = 1;
    while b.len() > 1 {
        let a = poly_gcd(&b, &d);
        b = poly_divexact(&b, &a);
        let c = poly_divexact(&d, &a);
        d = poly_sub(&c, &poly_derivative(&b));
        out.push((k, a));
        k += 1;
    }
    out
}
