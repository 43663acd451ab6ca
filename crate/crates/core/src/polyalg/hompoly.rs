//! Dense homogeneous polynomials in three variables.
//!
//! Monomials of a fixed degree are stored in graded-lexicographic order with
//! `x > y > z`, so index 0 is `x^n` and the last index is `z^n`.

use std::fmt;

use crate::field::{Field, C64};
use crate::polyalg::binform::BinForm;
use crate::projgeom::ProjPoint;
use crate::{Error, Result};

pub type Exponent = [u32; 3];

pub fn monomial_count(n: u32) -> usize {
    ((n as usize + 1) * (n as usize + 2)) / 2
}

pub fn monomial_index(e: Exponent) -> usize {
    let n = (e[0] + e[1] + e[2]) as usize;
    let (i, j) = (e[0] as usize, e[1] as usize);
    (n - i) * (n - i + 1) / 2 + (n - i - j)
}

/// All exponent triples of total degree `n`, in storage order.
pub fn monomials(n: u32) -> Vec<Exponent> {
    let mut out = Vec::with_capacity(monomial_count(n));
    for i in (0..=n).rev() {
        for j in (0..=n - i).rev() {
            out.push([i, j, n - i - j]);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomPoly3<K> {
    degree: u32,
    coeffs: Vec<K>,
}

impl<K: Field> HomPoly3<K> {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            coeffs: vec![K::zero(); monomial_count(degree)],
        }
    }

    pub fn constant(c: K) -> Self {
        Self { degree: 0, coeffs: vec![c] }
    }

    /// The coordinate function `x`, `y` or `z`.
    pub fn var(i: usize) -> Self {
        let mut e = [0, 0, 0];
        e[i] = 1;
        Self::monomial(e, K::one())
    }

    pub fn monomial(e: Exponent, c: K) -> Self {
        let mut p = Self::zero(e.iter().sum());
        p.coeffs[monomial_index(e)] = c;
        p
    }

    /// Linear form `a x + b y + c z`.
    pub fn linear(coeffs: &[K; 3]) -> Self {
        Self {
            degree: 1,
            coeffs: coeffs.to_vec(),
        }
    }

    pub fn from_terms(degree: u32, terms: &[(Exponent, K)]) -> Result<Self> {
        let mut p = Self::zero(degree);
        for (e, c) in terms {
            if e.iter().sum::<u32>() != degree {
                return Err(Error::DegreeMismatch(format!(
                    "monomial {e:?} in a form of degree {degree}"
                )));
            }
            let i = monomial_index(*e);
            p.coeffs[i] = p.coeffs[i].clone() + c.clone();
        }
        Ok(p)
    }

    pub fn from_int_terms(degree: u32, terms: &[(Exponent, i64)]) -> Result<Self> {
        let t: Vec<_> = terms.iter().map(|(e, c)| (*e, K::from_i64(*c))).collect();
        Self::from_terms(degree, &t)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn coeff(&self, e: Exponent) -> &K {
        &self.coeffs[monomial_index(e)]
    }

    /// Nonzero terms in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &K)> + '_ {
        monomials(self.degree)
            .into_iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_negligible(0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible(0.0))
    }

    /// Zero up to `tol` relative to `scale` in the floating regime.
    pub fn is_negligible(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible(tol))
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs_f64().powi(2)).sum::<f64>().sqrt()
    }

    pub fn map<L: Field>(&self, f: impl Fn(&K) -> L) -> HomPoly3<L> {
        HomPoly3 {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_c64(&self) -> HomPoly3<C64> {
        self.map(|c| c.to_c64())
    }

    pub fn scale(&self, s: &K) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "adding forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(Self {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        let mb = monomials(other.degree);
        for (ea, ca) in self.terms() {
            for (eb, cb) in mb.iter().zip(&other.coeffs) {
                if cb.is_negligible(0.0) {
                    continue;
                }
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                let i = monomial_index(e);
                out.coeffs[i] = out.coeffs[i].clone() + ca.clone() * cb.clone();
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(K::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn evaluate(&self, p: &[K; 3]) -> K {
        let pw: Vec<Vec<K>> = p
            .iter()
            .map(|v| {
                let mut out = vec![K::one()];
                for k in 0..self.degree as usize {
                    out.push(out[k].clone() * v.clone());
                }
                out
            })
            .collect();
        self.terms().fold(K::zero(), |acc, (e, c)| {
            acc + c.clone()
                * pw[0][e[0] as usize].clone()
                * pw[1][e[1] as usize].clone()
                * pw[2][e[2] as usize].clone()
        })
    }

    /// Value at the canonical representative of `p`.
    pub fn evaluate_at(&self, p: &ProjPoint<K>) -> K {
        self.evaluate(p.coords())
    }

    /// `|F(p)| / ‖F‖` at the unit representative of `p`.
    pub fn relative_residual(&self, p: &ProjPoint<K>) -> f64 {
        let n = self.norm();
        if n == 0.0 {
            return 0.0;
        }
        let v = self.to_c64().evaluate(&p.unit_c64());
        v.norm() / n
    }

    pub fn partial(&self, var: usize) -> Self {
        if self.degree == 0 {
            return Self::zero(0);
        }
        let mut out = Self::zero(self.degree - 1);
        for (e, c) in self.terms() {
            if e[var] == 0 {
                continue;
            }
            let mut f = e;
            f[var] -= 1;
            let i = monomial_index(f);
            out.coeffs[i] = out.coeffs[i].clone() + c.clone() * K::from_i64(e[var] as i64);
        }
        out
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms().any(|(e, _)| e[var] > 0)
    }

    /// Substitutes three forms of a common degree for `(x, y, z)`.
    pub fn compose(&self, subs: &[HomPoly3<K>; 3]) -> Result<Self> {
        let m = subs[0].degree;
        if subs.iter().any(|s| s.degree != m) {
            return Err(Error::DegreeMismatch("substituted forms differ in degree".into()));
        }
        let pw: Vec<Vec<HomPoly3<K>>> = subs
            .iter()
            .map(|s| {
                let mut out = vec![Self::constant(K::one())];
                for k in 0..self.degree as usize {
                    out.push(out[k].mul(s));
                }
                out
            })
            .collect();
        let mut acc = Self::zero(self.degree * m);
        for (e, c) in self.terms() {
            let t = pw[0][e[0] as usize]
                .mul(&pw[1][e[1] as usize])
                .mul(&pw[2][e[2] as usize])
                .scale(c);
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Substitutes three binary forms of a common degree, giving a binary
    /// form of degree `deg(self) * m`.
    pub fn substitute_binary(&self, subs: &[BinForm<K>; 3]) -> Result<BinForm<K>> {
        let m = subs[0].degree();
        if subs.iter().any(|s| s.degree() != m) {
            return Err(Error::DegreeMismatch("substituted binary forms differ in degree".into()));
        }
        let pw: Vec<Vec<BinForm<K>>> = subs
            .iter()
            .map(|s| {
                let mut out = vec![BinForm::constant(K::one())];
                for k in 0..self.degree as usize {
                    out.push(out[k].mul(s));
                }
                out
            })
            .collect();
        let mut acc = BinForm::zero(self.degree * m);
        for (e, c) in self.terms() {
            let t = pw[0][e[0] as usize]
                .mul(&pw[1][e[1] as usize])
                .mul(&pw[2][e[2] as usize])
                .scale(c);
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    fn leading_index(&self, floor: f64) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_negligible(floor))
    }

    /// Multivariate division by a single form in graded-lex order.
    /// Returns `(quotient, remainder)`; since a single form is a Gröbner
    /// basis of the ideal it generates, the remainder vanishes iff the
    /// divisor divides `self`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.degree > self.degree {
            return Ok((Self::zero(0), self.clone()));
        }
        let floor = match K::REGIME {
            crate::field::Regime::Exact => 0.0,
            crate::field::Regime::Float => 1e-14 * divisor.norm(),
        };
        let lead = divisor.leading_index(floor).ok_or(Error::ZeroForm)?;
        let dmon = monomials(divisor.degree);
        let lead_e = dmon[lead];
        let lead_c = divisor.coeffs[lead].clone();
        let dterms: Vec<(Exponent, K)> = dmon
            .iter()
            .zip(&divisor.coeffs)
            .filter(|(_, c)| !c.is_negligible(0.0))
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        let mons = monomials(self.degree);
        let mut work = self.coeffs.clone();
        let mut quot = Self::zero(self.degree - divisor.degree);
        let mut rem = Self::zero(self.degree);
        for (idx, e) in mons.iter().enumerate() {
            let c = work[idx].clone();
            if c.is_negligible(0.0) {
                continue;
            }
            if (0..3).all(|v| e[v] >= lead_e[v]) {
                let qe = [e[0] - lead_e[0], e[1] - lead_e[1], e[2] - lead_e[2]];
                let t = c / lead_c.clone();
                let qi = monomial_index(qe);
                quot.coeffs[qi] = quot.coeffs[qi].clone() + t.clone();
                for (de, dc) in &dterms {
                    let ne = [qe[0] + de[0], qe[1] + de[1], qe[2] + de[2]];
                    let ni = monomial_index(ne);
                    work[ni] = work[ni].clone() - t.clone() * dc.clone();
                }
                work[idx] = K::zero();
            } else {
                rem.coeffs[idx] = c;
                work[idx] = K::zero();
            }
        }
        Ok((quot, rem))
    }

    /// Exact quotient if `divisor` divides `self` (remainder norm below
    /// `tol * ‖self‖` in the floating regime).
    pub fn divide_exact(&self, divisor: &Self, tol: f64) -> Result<Option<Self>> {
        let (q, r) = self.div_rem(divisor)?;
        let ok = match K::REGIME {
            crate::field::Regime::Exact => r.is_zero(),
            crate::field::Regime::Float => r.norm() <= tol * self.norm().max(f64::MIN_POSITIVE),
        };
        Ok(ok.then_some(q))
    }

    /// Scales so that the first nonzero coefficient (graded-lex) is 1.
    pub fn monic(&self) -> Self {
        let floor = match K::REGIME {
            crate::field::Regime::Exact => 0.0,
            crate::field::Regime::Float => 1e-12 * self.norm(),
        };
        match self.leading_index(floor) {
            Some(i) => self.scale(&(K::one() / self.coeffs[i].clone())),
            None => self.clone(),
        }
    }

    /// Whether `self = c * other` for a nonzero constant `c`.
    pub fn proportional(&self, other: &Self, tol: f64) -> bool {
        if self.degree != other.degree {
            return false;
        }
        let a = self.monic();
        let b = other.monic();
        match a.sub(&b) {
            Ok(d) => match K::REGIME {
                crate::field::Regime::Exact => d.is_zero(),
                crate::field::Regime::Float => d.norm() <= tol * a.norm().max(1.0),
            },
            Err(_) => false,
        }
    }

    pub fn display_with<'a>(&'a self, vars: [&'a str; 3]) -> impl fmt::Display + 'a
    where
        K: fmt::Display,
    {
        PolyDisplay { poly: self, vars }
    }
}

struct PolyDisplay<'a, K> {
    poly: &'a HomPoly3<K>,
    vars: [&'a str; 3],
}

impl<K: Field + fmt::Display> fmt::Display for PolyDisplay<'_, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.poly.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for v in 0..3 {
                match e[v] {
                    0 => {}
                    1 => write!(f, "*{}", self.vars[v])?,
                    k => write!(f, "*{}^{k}", self.vars[v])?,
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl<K: Field + fmt::Display> fmt::Display for HomPoly3<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(["x", "y", "z"]))
    }
}
