//! Polynomial algebra in two and three homogeneous variables.

pub mod binform;
pub mod endo;
pub mod hompoly;
pub mod implicit;
pub mod interp;
pub mod newton;
pub mod ratmap;
pub mod roots;
pub mod symmetric;

pub use binform::{BinForm, P1Point};
pub use endo::{base_point_free, EndoP2, PlaneMap};
pub use hompoly::{monomial_count, monomial_index, monomials, Exponent, HomPoly3};
pub use implicit::{implicitize, implicitize_points};
pub use interp::{interpolate_endo, Interpolation};
pub use newton::{elementary_symmetric, newton_power_sum, SymPoly};
pub use ratmap::{resultant, Divisor1, RatMapP1};
pub use roots::{binary_roots, Root};
pub use symmetric::{expand_symmetric, symmetric_reduce, BiForm};

use crate::field::{Field, Regime};
use crate::projgeom::{ProjLine, ProjPoint};
use crate::{Error, Result};

/// Floating divisibility threshold relative to the dividend's norm.
pub const DIVISIBILITY_TOL: f64 = 1e-8;

/// Restriction of `F` to `l`, parameterized as `a0 p + a1 q` with `[p, q]`
/// from `ProjLine::basis`. A zero form means `l ⊂ {F = 0}`.
pub fn restrict_to_line<K: Field>(f: &HomPoly3<K>, l: &ProjLine<K>) -> (BinForm<K>, [ProjPoint<K>; 2]) {
    let basis = l.basis();
    let restricted = restrict_to_span(f, &basis);
    (restricted, basis)
}

/// Restriction of `F` to the line through `p` and `q`, as `a0 p + a1 q`.
pub fn restrict_to_span<K: Field>(f: &HomPoly3<K>, span: &[ProjPoint<K>; 2]) -> BinForm<K> {
    let (p, q) = (span[0].coords(), span[1].coords());
    let subs = [0, 1, 2].map(|i| BinForm::from_coeffs(vec![p[i].clone(), q[i].clone()]));
    f.substitute_binary(&subs).expect("linear substitution")
}

/// The point `a0 p + a1 q` for a parameter `[a0 : a1]`.
pub fn point_on_span<K: Field>(span: &[ProjPoint<K>; 2], a: &P1Point<K>) -> Result<ProjPoint<K>> {
    let (p, q) = (span[0].coords(), span[1].coords());
    let [a0, a1] = a.coords().clone();
    ProjPoint::from_array([0, 1, 2].map(|i| a0.clone() * p[i].clone() + a1.clone() * q[i].clone()))
}

/// Whether a restricted form counts as identically zero.
pub fn restriction_vanishes<K: Field>(b: &BinForm<K>, f: &HomPoly3<K>, tol: f64) -> bool {
    match K::REGIME {
        Regime::Exact => b.is_zero(),
        Regime::Float => b.norm() <= tol * f.norm(),
    }
}

/// Largest `k` such that the linear form of `l` to the power `k` divides
/// `F`, with the quotient.
pub fn linear_factor_multiplicity<K: Field>(f: &HomPoly3<K>, l: &ProjLine<K>, tol: f64) -> Result<(u32, HomPoly3<K>)> {
    if f.is_zero() {
        return Err(Error::ZeroForm);
    }
    let lin = HomPoly3::linear(l.coords());
    let mut k = 0;
    let mut cur = f.clone();
    while cur.degree() >= 1 {
        match cur.divide_exact(&lin, tol)? {
            Some(q) => {
                k += 1;
                cur = q;
            }
            None => break,
        }
    }
    Ok((k, cur))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;

    fn p(deg: u32, t: &[([u32; 3], i64)]) -> HomPoly3<Q> {
        HomPoly3::from_int_terms(deg, t).unwrap()
    }

    #[test]
    fn linear_factor_peeling() {
        let conic = p(2, &[([1, 1, 0], 1), ([0, 0, 2], -1)]);
        let f = conic.mul(&HomPoly3::var(2));
        let (k, q) = linear_factor_multiplicity(&f, &ProjLine::from_ints([0, 0, 1]).unwrap(), 0.0).unwrap();
        assert_eq!((k, q), (1, conic.clone()));
        let s = p(1, &[([1, 0, 0], 1), ([0, 1, 0], 1)]).pow(3);
        let (k, q) = linear_factor_multiplicity(&s, &ProjLine::from_ints([1, 1, 0]).unwrap(), 0.0).unwrap();
        assert_eq!(k, 3);
        assert_eq!(q.degree(), 0);
        let (k, q) = linear_factor_multiplicity(&conic, &ProjLine::from_ints([1, 0, 0]).unwrap(), 0.0).unwrap();
        assert_eq!((k, q), (0, conic));
    }

    #[test]
    fn conic_tangent_restriction_has_double_root() {
        let conic = p(2, &[([1, 1, 0], 1), ([0, 0, 2], -1)]);
        let (b, basis) = restrict_to_line(&conic, &ProjLine::from_ints([0, 1, 0]).unwrap());
        let r = binary_roots(&b).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 2);
        let pt = point_on_span(&basis, r[0].exact.as_ref().unwrap()).unwrap();
        assert_eq!(pt, ProjPoint::from_ints([1, 0, 0]).unwrap());
    }

    #[test]
    fn contained_line_restricts_to_zero() {
        let f = p(2, &[([1, 1, 0], 1)]);
        let l = ProjLine::from_ints([1, 0, 0]).unwrap();
        let (b, _) = restrict_to_line(&f, &l);
        assert!(restriction_vanishes(&b, &f, 1e-12));
    }
}
