//! Points and lines of the projective plane and its dual.
//!
//! Both types store a canonical representative: in the exact regime the
//! first nonzero coordinate is 1; in the floating regime the vector has unit
//! norm and its first non-negligible coordinate is a positive real.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::field::{Field, C64, Q};
use crate::{Error, Result};

/// Default tolerance on unit-normalized representatives.
pub const DEFAULT_TOL: f64 = 1e-9;

pub fn cross<K: Field>(a: &[K; 3], b: &[K; 3]) -> [K; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn dot<K: Field>(a: &[K; 3], b: &[K; 3]) -> K {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone() + a[2].clone() * b[2].clone()
}

pub fn det3<K: Field>(a: &[K; 3], b: &[K; 3], c: &[K; 3]) -> K {
    dot(a, &cross(b, c))
}

pub fn norm3<K: Field>(a: &[K; 3]) -> f64 {
    a.iter().map(|x| x.abs_f64().powi(2)).sum::<f64>().sqrt()
}

fn canonicalize<K: Field>(v: [K; 3]) -> Result<[K; 3]> {
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n = norm3(&v);
    if v.iter().all(|x| x.is_negligible(0.0)) || n == 0.0 {
        return Err(Error::ZeroVector);
    }
    // Exact values may overflow f64 (norm = inf); the pivot rule still works.
    let floor = if n.is_finite() { 1e-12 * n } else { 0.0 };
    let lead = v
        .iter()
        .position(|x| !x.is_negligible(floor))
        .ok_or(Error::ZeroVector)?;
    let scale = match K::REGIME {
        crate::field::Regime::Exact => K::one() / v[lead].clone(),
        crate::field::Regime::Float => {
            let z = v[lead].to_c64();
            let phase = z / z.norm();
            K::from_c64(C64::new(1.0, 0.0) / (phase * n)).expect("floating regime")
        }
    };
    let mut out = v.map(|x| x * scale.clone());
    out[lead] = match K::REGIME {
        crate::field::Regime::Exact => K::one(),
        crate::field::Regime::Float => {
            K::from_c64(C64::new(out[lead].to_c64().norm(), 0.0)).expect("floating regime")
        }
    };
    Ok(out)
}

macro_rules! homogeneous_triple {
    ($name:ident, $what:literal) => {
        #[doc = concat!("A ", $what, " given by a canonical homogeneous triple.")]
        #[derive(Clone, Debug)]
        pub struct $name<K> {
            coords: [K; 3],
        }

        impl<K: Field> $name<K> {
            pub fn new(a: K, b: K, c: K) -> Result<Self> {
                Self::from_array([a, b, c])
            }

            pub fn from_array(v: [K; 3]) -> Result<Self> {
                Ok(Self { coords: canonicalize(v)? })
            }

            pub fn from_ints(v: [i64; 3]) -> Result<Self> {
                Self::from_array(v.map(K::from_i64))
            }

            pub fn coords(&self) -> &[K; 3] {
                &self.coords
            }

            pub fn to_c64(&self) -> $name<C64> {
                $name::from_array(self.coords.clone().map(|x| x.to_c64()))
                    .expect("conversion of a valid triple")
            }

            /// Unit-norm complex representative.
            pub fn unit_c64(&self) -> [C64; 3] {
                let v = self.coords.clone().map(|x| x.to_c64());
                let n = norm3(&v);
                v.map(|x| x / n)
            }

            /// Sine of the angle between representatives; 0 iff equal.
            pub fn distance(&self, other: &Self) -> f64 {
                norm3(&cross(&self.unit_c64(), &other.unit_c64()))
            }

            /// Projective equality: exact comparison of canonical forms, or
            /// distance below `tol` in the floating regime.
            pub fn same(&self, other: &Self, tol: f64) -> bool {
                match K::REGIME {
                    crate::field::Regime::Exact => self.coords == other.coords,
                    crate::field::Regime::Float => self.distance(other) <= tol,
                }
            }

            /// Deterministic ordering key on canonical coordinates.
            pub fn sort_key(&self) -> [(i64, i64); 3] {
                self.coords.clone().map(|x| {
                    let z = x.to_c64();
                    ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)
                })
            }
        }

        impl<K: Field> PartialEq for $name<K> {
            fn eq(&self, other: &Self) -> bool {
                self.same(other, DEFAULT_TOL)
            }
        }

        impl Eq for $name<Q> {}

        impl Hash for $name<Q> {
            fn hash<H: Hasher>(&self, state: &mut H) {
                self.coords.hash(state);
            }
        }

        impl<K: Field + fmt::Display> fmt::Display for $name<K> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let [a, b, c] = &self.coords;
                write!(f, "[{a}:{b}:{c}]")
            }
        }
    };
}

homogeneous_triple!(ProjPoint, "point of the projective plane");
homogeneous_triple!(ProjLine, "line of the projective plane (a point of the dual plane)");

impl<K: Field> ProjPoint<K> {
    /// The line with the same coordinates.
    pub fn dualize(&self) -> ProjLine<K> {
        ProjLine { coords: self.coords.clone() }
    }
}

impl<K: Field> ProjLine<K> {
    /// The point with the same coordinates.
    pub fn dualize(&self) -> ProjPoint<K> {
        ProjPoint { coords: self.coords.clone() }
    }

    /// Incidence test; residual is the modulus of the pairing of unit
    /// representatives.
    pub fn contains(&self, p: &ProjPoint<K>, tol: f64) -> (bool, f64) {
        match K::REGIME {
            crate::field::Regime::Exact => {
                let v = dot(&self.coords, p.coords());
                (v.is_negligible(0.0), v.abs_f64())
            }
            crate::field::Regime::Float => {
                let r = dot(&self.unit_c64(), &p.unit_c64()).norm();
                (r <= tol, r)
            }
        }
    }

    /// Two distinct points spanning the line, chosen deterministically: the
    /// intersections with the two coordinate lines other than the one
    /// selected by the largest coefficient.
    pub fn basis(&self) -> [ProjPoint<K>; 2] {
        let c = &self.coords;
        let k = (0..3)
            .max_by(|&a, &b| c[a].abs_f64().partial_cmp(&c[b].abs_f64()).unwrap())
            .unwrap();
        let mut pts = (0..3).filter(|&i| i != k).map(|i| {
            let mut e = [K::zero(), K::zero(), K::zero()];
            e[i] = K::one();
            ProjPoint::from_array(cross(c, &e)).expect("independent of a nonzero line")
        });
        [pts.next().unwrap(), pts.next().unwrap()]
    }
}

fn cross_checked<K: Field>(a: &[K; 3], b: &[K; 3], tol: f64) -> Option<[K; 3]> {
    let c = cross(a, b);
    let degenerate = match K::REGIME {
        crate::field::Regime::Exact => c.iter().all(|x| x.is_negligible(0.0)),
        crate::field::Regime::Float => {
            let scale = norm3(a) * norm3(b);
            norm3(&c) <= tol * scale
        }
    };
    (!degenerate).then_some(c)
}

pub fn join<K: Field>(p: &ProjPoint<K>, q: &ProjPoint<K>, tol: f64) -> Result<ProjLine<K>> {
    let c = cross_checked(p.coords(), q.coords(), tol).ok_or(Error::CoincidentPoints)?;
    ProjLine::from_array(c)
}

pub fn meet<K: Field>(l: &ProjLine<K>, m: &ProjLine<K>, tol: f64) -> Result<ProjPoint<K>> {
    let c = cross_checked(l.coords(), m.coords(), tol).ok_or(Error::CoincidentLines)?;
    ProjPoint::from_array(c)
}

/// Collinearity of three points. The residual is `|det|` of the canonical
/// representatives (unit-normalized in the floating regime).
pub fn collinear<K: Field>(
    p: &ProjPoint<K>,
    q: &ProjPoint<K>,
    r: &ProjPoint<K>,
    tol: f64,
) -> (bool, f64) {
    match K::REGIME {
        crate::field::Regime::Exact => {
            let d = det3(p.coords(), q.coords(), r.coords());
            (d.is_negligible(0.0), d.abs_f64())
        }
        crate::field::Regime::Float => {
            let d = det3(&p.unit_c64(), &q.unit_c64(), &r.unit_c64()).norm();
            (d <= tol, d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: [i64; 3]) -> ProjPoint<Q> {
        ProjPoint::from_ints(v).unwrap()
    }

    fn ln(v: [i64; 3]) -> ProjLine<Q> {
        ProjLine::from_ints(v).unwrap()
    }

    #[test]
    fn dualize_coordinate_points() {
        assert_eq!(pt([0, 0, 1]).dualize(), ln([0, 0, 1]));
        assert_eq!(pt([1, 1, 1]).dualize(), ln([1, 1, 1]));
        let p = pt([2, -3, 5]);
        assert_eq!(p.dualize().dualize(), p);
        assert_eq!(p.coords()[0], Q::from_i64(1));
    }

    #[test]
    fn join_and_meet() {
        assert_eq!(join(&pt([1, 0, 0]), &pt([0, 1, 0]), 0.0).unwrap(), ln([0, 0, 1]));
        assert_eq!(join(&pt([1, 0, 1]), &pt([0, 1, 1]), 0.0).unwrap(), ln([-1, -1, 1]));
        assert!(matches!(join(&pt([1, 2, 3]), &pt([2, 4, 6]), 0.0), Err(Error::CoincidentPoints)));
        assert_eq!(meet(&ln([1, 0, 0]), &ln([0, 1, 0]), 0.0).unwrap(), pt([0, 0, 1]));
        assert!(matches!(meet(&ln([1, 1, 0]), &ln([1, 1, 0]), 0.0), Err(Error::CoincidentLines)));
        let (p, q, r) = (pt([1, 2, 3]), pt([0, 1, -1]), pt([4, 0, 1]));
        let back = meet(&join(&p, &q, 0.0).unwrap(), &join(&p, &r, 0.0).unwrap(), 0.0).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn collinearity_residuals() {
        let (ok, r) = collinear(&pt([1, 0, 0]), &pt([0, 1, 0]), &pt([1, 1, 0]), 0.0);
        assert!(ok && r == 0.0);
        let (ok, r) = collinear(&pt([1, 0, 0]), &pt([0, 1, 0]), &pt([0, 0, 1]), 0.0);
        assert!(!ok && r == 1.0);
    }

    #[test]
    fn nodal_parameterization_is_collinear_on_inverse_products() {
        // psi(a) = [-a^2 : a : a^3 - 1]; psi(a), psi(b), psi(1/(ab)) are collinear.
        let psi = |a: Q| {
            ProjPoint::new(-(a.clone() * a.clone()), a.clone(), a.clone() * a.clone() * a - Q::from_i64(1))
                .unwrap()
        };
        let a = Q::new(3.into(), 7.into());
        let b = Q::new((-5).into(), 2.into());
        let c = Q::from_i64(1) / (a.clone() * b.clone());
        let (ok, r) = collinear(&psi(a), &psi(b), &psi(c), 0.0);
        assert!(ok, "residual {r}");
    }

    #[test]
    fn float_canonical_form_is_unit_with_positive_lead() {
        let p = ProjPoint::<C64>::new(C64::new(0.0, 2.0), C64::new(1.0, 1.0), C64::new(0.0, 0.0)).unwrap();
        assert!((norm3(p.coords()) - 1.0).abs() < 1e-15);
        assert!(p.coords()[0].im.abs() < 1e-15 && p.coords()[0].re > 0.0);
        let q = ProjPoint::<C64>::new(C64::new(0.0, -4.0), C64::new(-2.0, -2.0), C64::new(0.0, 0.0)).unwrap();
        assert_eq!(p, q);
        assert!(matches!(ProjPoint::<C64>::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)), Err(Error::ZeroVector)));
    }

    #[test]
    fn basis_spans_line() {
        let l = ln([3, -1, 2]);
        let [a, b] = l.basis();
        assert!(l.contains(&a, 0.0).0 && l.contains(&b, 0.0).0);
        assert_eq!(join(&a, &b, 0.0).unwrap(), l);
    }
}
