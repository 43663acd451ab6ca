//! Holomorphic selfmaps of the projective plane given by three forms.

use crate::field::{Field, Regime, C64};
use crate::linalg::{rank_mod_p, singular_values, DenseMatrix};
use crate::polyalg::hompoly::{monomial_count, monomial_index, monomials, HomPoly3};
use crate::projgeom::ProjPoint;
use crate::{Error, Result};

/// Anything that maps points of the plane to points of the plane with a
/// known algebraic degree.
pub trait PlaneMap<K: Field> {
    fn algebraic_degree(&self) -> u32;
    fn apply(&self, p: &ProjPoint<K>) -> Result<ProjPoint<K>>;
}

/// `f = [P : Q : R]` with `P, Q, R` of equal degree and no common zero.
#[derive(Clone, Debug, PartialEq)]
pub struct EndoP2<K> {
    comps: [HomPoly3<K>; 3],
}

/// Macaulay test: three forms of degree `d` have no common projective zero
/// iff every form of degree `3d - 2` lies in the ideal they generate, i.e.
/// `(A, B, C) ↦ AP + BQ + CR` from degree `2d - 2` is surjective.
pub fn base_point_free<K: Field>(comps: &[HomPoly3<K>; 3]) -> bool {
    let d = comps[0].degree();
    let src = monomials(2 * d - 2);
    let rows = monomial_count(3 * d - 2);
    let cols = 3 * src.len();
    let mut m = DenseMatrix::<K>::zeros(rows, cols);
    for (k, f) in comps.iter().enumerate() {
        for (s, e) in src.iter().enumerate() {
            for (fe, c) in f.terms() {
                let idx = monomial_index([e[0] + fe[0], e[1] + fe[1], e[2] + fe[2]]);
                m.set(idx, k * src.len() + s, c.clone());
            }
        }
    }
    match K::REGIME {
        // Full rank modulo a prime implies full rank over Q.
        Regime::Exact => rank_mod_p(&m) == Some(rows) || m.rref(0.0).len() == rows,
        Regime::Float => {
            // Work with the transpose so the singular value count equals
            // `rows`; alternate row and column equilibration first since
            // coefficient magnitudes of fitted maps span many orders.
            let mut t: Vec<Vec<C64>> = (0..cols).map(|j| (0..rows).map(|i| m.get(i, j).to_c64()).collect()).collect();
            for _ in 0..8 {
                for r in t.iter_mut() {
                    let n = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                    if n > 0.0 {
                        r.iter_mut().for_each(|z| *z /= n);
                    }
                }
                for j in 0..rows {
                    let n = t.iter().map(|r| r[j].norm_sqr()).sum::<f64>().sqrt();
                    if n > 0.0 {
                        t.iter_mut().for_each(|r| r[j] /= n);
                    }
                }
            }
            let sv = singular_values(&DenseMatrix::from_rows(t));
            sv.len() >= rows && sv[rows - 1] > 1e-10 * sv[0]
        }
    }
}

impl<K: Field> EndoP2<K> {
    /// Requires algebraic degree `d >= 2`.
    pub fn new(comps: [HomPoly3<K>; 3]) -> Result<Self> {
        if comps[0].degree() < 2 {
            return Err(Error::InvalidDegree(format!(
                "algebraic degree {} < 2 is invertible",
                comps[0].degree()
            )));
        }
        Self::with_any_degree(comps)
    }

    /// Like `new` but admits linear maps.
    pub fn with_any_degree(comps: [HomPoly3<K>; 3]) -> Result<Self> {
        let d = comps[0].degree();
        if comps.iter().any(|c| c.degree() != d) {
            return Err(Error::DegreeMismatch(format!(
                "component degrees {}, {}, {}",
                comps[0].degree(),
                comps[1].degree(),
                comps[2].degree()
            )));
        }
        if d == 0 {
            return Err(Error::InvalidDegree("constant map".into()));
        }
        if !comps.iter().flat_map(|c| c.coeffs()).all(|c| c.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !base_point_free(&comps) {
            return Err(Error::CommonZero);
        }
        Ok(Self { comps })
    }

    pub fn degree(&self) -> u32 {
        self.comps[0].degree()
    }

    pub fn components(&self) -> &[HomPoly3<K>; 3] {
        &self.comps
    }

    pub fn to_c64(&self) -> EndoP2<C64> {
        EndoP2 { comps: [self.comps[0].to_c64(), self.comps[1].to_c64(), self.comps[2].to_c64()] }
    }

    pub fn apply_coords(&self, p: &[K; 3]) -> [K; 3] {
        [self.comps[0].evaluate(p), self.comps[1].evaluate(p), self.comps[2].evaluate(p)]
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &EndoP2<K>) -> Result<EndoP2<K>> {
        let c = other.components();
        let out = [
            self.comps[0].compose(c)?,
            self.comps[1].compose(c)?,
            self.comps[2].compose(c)?,
        ];
        Ok(EndoP2 { comps: out })
    }

    /// `det(∂f_i/∂x_j)`, of degree `3(d - 1)`.
    pub fn jacobian_determinant(&self) -> HomPoly3<K> {
        let j: Vec<Vec<HomPoly3<K>>> =
            self.comps.iter().map(|f| (0..3).map(|v| f.partial(v)).collect()).collect();
        let minor = |a: usize, b: usize, r1: usize, r2: usize| {
            j[r1][a].mul(&j[r2][b]).sub(&j[r1][b].mul(&j[r2][a])).expect("equal degrees")
        };
        let t0 = j[0][0].mul(&minor(1, 2, 1, 2));
        let t1 = j[0][1].mul(&minor(0, 2, 1, 2));
        let t2 = j[0][2].mul(&minor(0, 1, 1, 2));
        t0.sub(&t1).and_then(|t| t.add(&t2)).expect("equal degrees")
    }
}

impl<K: Field> PlaneMap<K> for EndoP2<K> {
    fn algebraic_degree(&self) -> u32 {
        self.degree()
    }

    fn apply(&self, p: &ProjPoint<K>) -> Result<ProjPoint<K>> {
        let c = match K::REGIME {
            Regime::Exact => p.coords().clone(),
            Regime::Float => {
                let u = p.unit_c64();
                [0, 1, 2].map(|i| K::from_c64(u[i]).expect("floating regime"))
            }
        };
        ProjPoint::from_array(self.apply_coords(&c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    fn p(deg: u32, t: &[([u32; 3], i64)]) -> HomPoly3<Q> {
        HomPoly3::from_int_terms(deg, t).unwrap()
    }

    #[test]
    fn monomial_map_jacobian() {
        for d in 2..5u32 {
            let f = EndoP2::new([
                p(d, &[([d, 0, 0], 1)]),
                p(d, &[([0, d, 0], 1)]),
                p(d, &[([0, 0, d], 1)]),
            ])
            .unwrap();
            let j = f.jacobian_determinant();
            assert_eq!(j.degree(), 3 * (d - 1));
            let expect = p(3 * (d - 1), &[([d - 1, d - 1, d - 1], (d * d * d) as i64)]);
            assert_eq!(j, expect);
        }
    }

    #[test]
    fn nodal_f2_jacobian_oracle() {
        // [x²−2yz : y²−2xz : z²]; det by hand = 8z(xy − z²) = 8xyz − 8z³.
        let f = EndoP2::new([
            p(2, &[([2, 0, 0], 1), ([0, 1, 1], -2)]),
            p(2, &[([0, 2, 0], 1), ([1, 0, 1], -2)]),
            p(2, &[([0, 0, 2], 1)]),
        ])
        .unwrap();
        let expect = p(3, &[([1, 1, 1], 8), ([0, 0, 3], -8)]);
        assert_eq!(f.jacobian_determinant(), expect);
    }

    #[test]
    fn base_points_are_detected() {
        let bad = EndoP2::new([p(2, &[([2, 0, 0], 1)]), p(2, &[([2, 0, 0], 1)]), p(2, &[([0, 0, 2], 1)])]);
        assert!(matches!(bad, Err(Error::CommonZero)));
        // x², xy, z² + xy vanish together at [0:1:0].
        let pencil = EndoP2::new([
            p(2, &[([2, 0, 0], 1)]),
            p(2, &[([1, 1, 0], 1)]),
            p(2, &[([0, 0, 2], 1), ([1, 1, 0], 1)]),
        ]);
        assert!(matches!(pencil, Err(Error::CommonZero)));
        let ok = EndoP2::new([
            p(2, &[([2, 0, 0], 1)]),
            p(2, &[([0, 2, 0], 1), ([1, 1, 0], 1)]),
            p(2, &[([0, 0, 2], 1), ([1, 1, 0], 1)]),
        ]);
        assert!(ok.is_ok());
        let fl = ok.unwrap().to_c64();
        assert!(base_point_free(fl.components()));
    }

    #[test]
    fn linear_maps_need_explicit_opt_in() {
        let id = [p(1, &[([1, 0, 0], 1)]), p(1, &[([0, 1, 0], 1)]), p(1, &[([0, 0, 1], 1)])];
        assert!(matches!(EndoP2::new(id.clone()), Err(Error::InvalidDegree(_))));
        assert!(EndoP2::with_any_degree(id).is_ok());
    }
}
