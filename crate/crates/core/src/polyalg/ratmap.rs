//! Rational selfmaps of the projective line.

use crate::field::{Field, Regime, C64};
use crate::linalg::{singular_values, DenseMatrix};
use crate::polyalg::binform::{BinForm, P1Point};
use crate::polyalg::roots::{binary_roots, Root};
use crate::{Error, Result};

/// `φ([a0:a1]) = [den(a) : num(a)]`, i.e. the affine map `a ↦ num/den`.
#[derive(Clone, Debug)]
pub struct RatMapP1<K> {
    num: BinForm<K>,
    den: BinForm<K>,
}

/// Sylvester matrix of two binary forms (homogeneous coefficients).
pub fn sylvester<K: Field>(f: &BinForm<K>, g: &BinForm<K>) -> DenseMatrix<K> {
    let m = f.degree() as usize;
    let n = g.degree() as usize;
    let size = m + n;
    let mut s = DenseMatrix::zeros(size, size);
    for r in 0..n {
        for (i, c) in f.coeffs().iter().enumerate() {
            s.set(r, r + i, c.clone());
        }
    }
    for r in 0..m {
        for (i, c) in g.coeffs().iter().enumerate() {
            s.set(n + r, r + i, c.clone());
        }
    }
    s
}

pub fn resultant<K: Field>(f: &BinForm<K>, g: &BinForm<K>) -> K {
    sylvester(f, g).determinant()
}

impl<K: Field> RatMapP1<K> {
    /// Validates equal degree `d >= 1` and the absence of common roots (exact
    /// resultant, or the Sylvester matrix's singular value ratio above
    /// `1e-12` in the floating regime).
    pub fn new(num: BinForm<K>, den: BinForm<K>) -> Result<Self> {
        if num.degree() != den.degree() {
            return Err(Error::DegreeMismatch(format!(
                "numerator degree {} vs denominator degree {}",
                num.degree(),
                den.degree()
            )));
        }
        if num.degree() == 0 {
            return Err(Error::InvalidDegree("a map of P1 needs degree >= 1".into()));
        }
        if num.is_zero() || den.is_zero() {
            return Err(Error::ZeroForm);
        }
        let syl = sylvester(&num, &den);
        let separated = match K::REGIME {
            Regime::Exact => !syl.determinant().is_negligible(0.0),
            Regime::Float => {
                let c = DenseMatrix::from_rows(
                    (0..syl.rows).map(|i| syl.row(i).iter().map(|x| x.to_c64()).collect()).collect(),
                );
                let sv = singular_values(&c);
                sv.last().copied().unwrap_or(0.0) > 1e-12 * sv[0]
            }
        };
        if !separated {
            return Err(Error::CommonZero);
        }
        Ok(Self { num, den })
    }

    /// Affine description `a ↦ N(a)/D(a)` from coefficient lists (low to
    /// high); the degree is the larger of the two.
    pub fn from_affine(num: &[K], den: &[K]) -> Result<Self> {
        let deg = |c: &[K]| c.iter().rposition(|x| !x.is_negligible(0.0)).unwrap_or(0) as u32;
        let d = deg(num).max(deg(den));
        Self::new(BinForm::homogenize(num, d)?, BinForm::homogenize(den, d)?)
    }

    /// A polynomial map `a ↦ Σ c_i a^i`.
    pub fn polynomial(coeffs: &[K]) -> Result<Self> {
        Self::from_affine(coeffs, &[K::one()])
    }

    /// `a ↦ c a^d` for `d > 0`, `a ↦ c a^{d}` with negative `d` meaning `c / a^|d|`.
    pub fn power(c: K, d: i32) -> Result<Self> {
        let n = d.unsigned_abs();
        if d > 0 {
            Self::new(BinForm::monomial(n, n, c), BinForm::monomial(n, 0, K::one()))
        } else {
            Self::new(BinForm::monomial(n, 0, c), BinForm::monomial(n, n, K::one()))
        }
    }

    pub fn degree(&self) -> u32 {
        self.num.degree()
    }

    pub fn numerator(&self) -> &BinForm<K> {
        &self.num
    }

    pub fn denominator(&self) -> &BinForm<K> {
        &self.den
    }

    pub fn to_c64(&self) -> RatMapP1<C64> {
        RatMapP1 { num: self.num.to_c64(), den: self.den.to_c64() }
    }

    /// Homogeneous image `[den(p) : num(p)]` without normalization.
    pub fn apply_coords(&self, p: &[K; 2]) -> [K; 2] {
        [self.den.evaluate(p), self.num.evaluate(p)]
    }

    pub fn apply(&self, p: &P1Point<K>) -> P1Point<K> {
        let [a, b] = self.apply_coords(p.coords());
        P1Point::new(a, b).expect("no common zeros")
    }

    /// All preimages of `q` with multiplicities (roots of `q0 N - q1 D`).
    pub fn preimages(&self, q: &P1Point<K>) -> Result<Vec<Root<K>>> {
        let [q0, q1] = q.coords().clone();
        let f = self.num.scale(&q0).sub(&self.den.scale(&q1))?;
        binary_roots(&f)
    }

    /// The form `D a1 - N a0` whose roots are the fixed points.
    pub fn fixed_point_form(&self) -> BinForm<K> {
        self.den
            .mul(&BinForm::var(1))
            .sub(&self.num.mul(&BinForm::var(0)))
            .expect("equal degrees")
    }

    pub fn fixed_points(&self) -> Result<Vec<Root<K>>> {
        binary_roots(&self.fixed_point_form())
    }

    /// Wronskian `∂0D ∂1N - ∂1D ∂0N`, of degree `2d - 2`.
    pub fn wronskian(&self) -> BinForm<K> {
        self.den
            .derivative(0)
            .mul(&self.num.derivative(1))
            .sub(&self.den.derivative(1).mul(&self.num.derivative(0)))
            .expect("equal degrees")
    }

    /// Ramification divisor, from the roots of the Wronskian.
    pub fn crit_divisor(&self) -> Result<Divisor1<K>> {
        if self.degree() == 1 {
            return Ok(Divisor1 { points: Vec::new() });
        }
        Ok(Divisor1 { points: binary_roots(&self.wronskian())? })
    }

    /// Local degree of the map at `p`: the order of vanishing of
    /// `φ(p)_0 N - φ(p)_1 D` at `p`.
    pub fn local_degree(&self, p: &P1Point<K>) -> Result<u32> {
        let target = self.apply(p);
        let roots = self.preimages(&target)?;
        Ok(roots
            .iter()
            .filter(|r| match &r.exact {
                Some(e) if K::REGIME == Regime::Exact => e.same(p, 0.0),
                _ => r.point.distance(&p.to_c64()) < 1e-6,
            })
            .map(|r| r.multiplicity)
            .sum())
    }
}

/// A divisor on the projective line.
#[derive(Clone, Debug)]
pub struct Divisor1<K> {
    pub points: Vec<Root<K>>,
}

impl<K: Field> Divisor1<K> {
    pub fn degree(&self) -> u32 {
        self.points.iter().map(|r| r.multiplicity).sum()
    }

    pub fn support_size(&self) -> usize {
        self.points.len()
    }

    /// Multiplicity at `p` (chordal distance below `tol`).
    pub fn multiplicity_at(&self, p: &P1Point<C64>, tol: f64) -> u32 {
        self.points
            .iter()
            .filter(|r| r.point.distance(p) <= tol)
            .map(|r| r.multiplicity)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    #[test]
    fn power_map_critical_divisor() {
        for d in 2..6 {
            let phi = RatMapP1::<Q>::power(Q::from_i64(1), d).unwrap();
            let r = phi.crit_divisor().unwrap();
            assert_eq!(r.degree(), 2 * d as u32 - 2);
            assert_eq!(r.support_size(), 2);
            assert_eq!(r.multiplicity_at(&P1Point::affine(C64::new(0.0, 0.0)), 1e-9), d as u32 - 1);
            assert_eq!(r.multiplicity_at(&P1Point::infinity(), 1e-9), d as u32 - 1);
        }
    }

    #[test]
    fn quadratic_polynomial_is_critical_at_zero_and_infinity() {
        let phi = RatMapP1::<Q>::polynomial(&[Q::from_i64(-3), Q::from_i64(0), Q::from_i64(1)]).unwrap();
        let r = phi.crit_divisor().unwrap();
        assert_eq!(r.degree(), 2);
        assert!(r.points.iter().any(|x| x.point.is_infinity()));
        assert!(r.points.iter().any(|x| x.exact.as_ref().and_then(|e| e.value().cloned()) == Some(Q::from_i64(0))));
    }

    #[test]
    fn common_root_is_rejected() {
        // (a - 1) a / ((a - 1)(a + 1))
        let num = BinForm::<Q>::from_ints(&[0, -1, 1]);
        let den = BinForm::<Q>::from_ints(&[-1, 0, 1]);
        assert!(matches!(RatMapP1::new(num, den), Err(Error::CommonZero)));
    }

    #[test]
    fn apply_and_preimages() {
        let phi = RatMapP1::<Q>::power(Q::from_i64(1), 2).unwrap();
        let p = phi.apply(&P1Point::affine(Q::from_i64(3)));
        assert_eq!(p.value(), Some(&Q::from_i64(9)));
        let pre = phi.preimages(&P1Point::affine(Q::from_i64(4))).unwrap();
        assert_eq!(pre.len(), 2);
        assert!(pre.iter().all(|r| r.exact.is_some()));
        let inv = RatMapP1::<Q>::power(Q::from_i64(1), -2).unwrap();
        assert!(inv.apply(&P1Point::affine(Q::from_i64(0))).is_infinity());
        assert_eq!(inv.local_degree(&P1Point::infinity()).unwrap(), 2);
    }
}
