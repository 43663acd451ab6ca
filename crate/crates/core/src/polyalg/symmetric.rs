//! Bihomogeneous forms in two points of the projective line and their
//! reduction to the symmetric coordinates `(s0, s1, s2) = (a0b0, a0b1 + a1b0, a1b1)`.

use num_integer::binomial;

use crate::field::{Field, Regime};
use crate::polyalg::binform::BinForm;
use crate::polyalg::hompoly::{monomial_index, monomials, HomPoly3};
use crate::{Error, Result};

/// `Σ c[i][j] a0^(d-i) a1^i b0^(d-j) b1^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiForm<K> {
    degree: u32,
    c: Vec<Vec<K>>,
}

impl<K: Field> BiForm<K> {
    pub fn zero(degree: u32) -> Self {
        let n = degree as usize + 1;
        Self { degree, c: vec![vec![K::zero(); n]; n] }
    }

    /// `f(a) g(b)`.
    pub fn product(f: &BinForm<K>, g: &BinForm<K>) -> Result<Self> {
        if f.degree() != g.degree() {
            return Err(Error::DegreeMismatch("bidegree must be (d, d)".into()));
        }
        let mut out = Self::zero(f.degree());
        for (i, x) in f.coeffs().iter().enumerate() {
            for (j, y) in g.coeffs().iter().enumerate() {
                out.c[i][j] = x.clone() * y.clone();
            }
        }
        Ok(out)
    }

    /// `f(a) g(b) + g(a) f(b)`.
    pub fn symmetrized_product(f: &BinForm<K>, g: &BinForm<K>) -> Result<Self> {
        Self::product(f, g)?.add(&Self::product(g, f)?)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeff(&self, i: usize, j: usize) -> &K {
        &self.c[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.c[i][j] = v;
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch("bidegree must agree".into()));
        }
        let mut out = self.clone();
        for (row, orow) in out.c.iter_mut().zip(&other.c) {
            for (x, y) in row.iter_mut().zip(orow) {
                *x = x.clone() + y.clone();
            }
        }
        Ok(out)
    }

    fn norm(&self) -> f64 {
        self.c.iter().flatten().map(|x| x.abs_f64()).fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let floor = match K::REGIME {
            Regime::Exact => 0.0,
            Regime::Float => tol * self.norm(),
        };
        let n = self.degree as usize + 1;
        (0..n).all(|i| (0..i).all(|j| (self.c[i][j].clone() - self.c[j][i].clone()).is_negligible(floor)))
    }

    pub fn evaluate(&self, a: &[K; 2], b: &[K; 2]) -> K {
        let d = self.degree as usize;
        let pw = |x: &[K; 2]| -> Vec<K> {
            (0..=d).map(|i| x[0].pow((d - i) as u32) * x[1].pow(i as u32)).collect()
        };
        let (pa, pb) = (pw(a), pw(b));
        let mut acc = K::zero();
        for i in 0..=d {
            for j in 0..=d {
                acc = acc + self.c[i][j].clone() * pa[i].clone() * pb[j].clone();
            }
        }
        acc
    }
}

/// `(i, j)` grid position of the monomial `s0^p s1^q s2^r` under the
/// expansion term with `a`-exponent of `a1` maximal: `(q + r, r)`.
fn lead_position(e: [u32; 3]) -> (usize, usize) {
    ((e[1] + e[2]) as usize, e[2] as usize)
}

/// Expands `T(s0, s1, s2)` into a bihomogeneous form. A monomial
/// `s0^p s1^q s2^r` contributes `C(q, l)` at `(r + q - l, r + l)`.
pub fn expand_symmetric<K: Field>(t: &HomPoly3<K>) -> BiForm<K> {
    let mut out: BiForm<K> = BiForm::zero(t.degree());
    for (e, c) in t.terms() {
        if c.is_negligible(0.0) {
            continue;
        }
        let (q, r) = (e[1], e[2]);
        for l in 0..=q {
            let (i, j) = ((r + q - l) as usize, (r + l) as usize);
            let b = K::from_i64(binomial(q as i64, l as i64));
            out.c[i][j] = out.c[i][j].clone() + c.clone() * b;
        }
    }
    out
}

/// The unique `T` of degree `d` with `T(a0b0, a0b1 + a1b0, a1b1) = S`.
/// Solves the triangular system given by `lead_position`, processing the
/// positions `i >= j` by decreasing `i - j`, then confirms the expansion.
pub fn symmetric_reduce<K: Field>(s: &BiForm<K>, tol: f64) -> Result<HomPoly3<K>> {
    if !s.is_symmetric(tol) {
        return Err(Error::NotSymmetric);
    }
    let d = s.degree;
    let mut mons = monomials(d);
    mons.sort_by_key(|e| std::cmp::Reverse(e[1]));
    let mut t = HomPoly3::zero(d);
    let mut coeffs: Vec<K> = t.coeffs().to_vec();
    for e in &mons {
        let (i, j) = lead_position(*e);
        let mut v = s.c[i][j].clone();
        // Monomials with larger s1-exponent that also reach (i, j).
        for l in 1..=j {
            let (ii, jj) = (i + l, j - l);
            if ii > d as usize {
                break;
            }
            let q = (ii - jj) as u32;
            let r = jj as u32;
            let p = d - q - r;
            let b = K::from_i64(binomial(q as i64, l as i64));
            v = v - coeffs[monomial_index([p, q, r])].clone() * b;
        }
        coeffs[monomial_index(*e)] = v;
    }
    for (e, c) in monomials(d).into_iter().zip(coeffs) {
        t = t.add(&HomPoly3::monomial(e, c))?;
    }
    let back = expand_symmetric(&t);
    let floor = match K::REGIME {
        Regime::Exact => 0.0,
        Regime::Float => tol * s.norm().max(f64::MIN_POSITIVE),
    };
    let n = d as usize + 1;
    let agrees = (0..n).all(|i| (0..n).all(|j| (back.c[i][j].clone() - s.c[i][j].clone()).is_negligible(floor)));
    if !agrees {
        return Err(Error::NotSymmetric);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    #[test]
    fn basic_reductions() {
        // a0²b0² → s0²
        let mut s = BiForm::<Q>::zero(2);
        s.set(0, 0, q(1));
        let t = symmetric_reduce(&s, 0.0).unwrap();
        assert_eq!(t, HomPoly3::from_int_terms(2, &[([2, 0, 0], 1)]).unwrap());
        // a0²b1² + a1²b0² → s1² − 2 s0 s2
        let mut s = BiForm::<Q>::zero(2);
        s.set(0, 2, q(1));
        s.set(2, 0, q(1));
        let t = symmetric_reduce(&s, 0.0).unwrap();
        assert_eq!(t, HomPoly3::from_int_terms(2, &[([0, 2, 0], 1), ([1, 0, 1], -2)]).unwrap());
        // (a0b1 + a1b0) a0b0 → s0 s1
        let mut s = BiForm::<Q>::zero(2);
        s.set(0, 1, q(1));
        s.set(1, 0, q(1));
        let t = symmetric_reduce(&s, 0.0).unwrap();
        assert_eq!(t, HomPoly3::from_int_terms(2, &[([1, 1, 0], 1)]).unwrap());
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let mut s = BiForm::<Q>::zero(1);
        s.set(0, 1, q(1));
        assert!(matches!(symmetric_reduce(&s, 0.0), Err(Error::NotSymmetric)));
    }

    #[test]
    fn expansion_matches_pointwise_substitution() {
        let t = HomPoly3::<Q>::from_int_terms(3, &[([0, 3, 0], 2), ([1, 1, 1], -5), ([0, 0, 3], 7)]).unwrap();
        let s = expand_symmetric(&t);
        let (a, b) = ([q(2), q(-3)], [q(5), q(7)]);
        let sv = [a[0].clone() * b[0].clone(), a[0].clone() * b[1].clone() + a[1].clone() * b[0].clone(), a[1].clone() * b[1].clone()];
        assert_eq!(s.evaluate(&a, &b), t.evaluate(&sv));
    }
}
