//! Implicit equations of parameterized plane curves.

use rand::Rng;

use crate::field::{Field, Regime, C64};
use crate::linalg::DenseMatrix;
use crate::polyalg::binform::BinForm;
use crate::polyalg::hompoly::{monomial_count, monomials, HomPoly3};
use crate::projgeom::norm3;
use crate::{Error, Result};

/// Singular value ratio below which the evaluation matrix counts as rank
/// deficient (floating regime).
pub const RANK_DROP_RATIO: f64 = 1e-9;

/// Lowest-degree nonzero form vanishing on points drawn from `sample`.
///
/// For each degree `D` up to `max_degree`, evaluates the degree-`D`
/// monomials at `2 N_D` sampled points and looks for a kernel. The exact
/// regime finds the kernel by exact elimination; the floating regime uses
/// the SVD with `RANK_DROP_RATIO`. The result is scaled to be monic in
/// graded-lex order.
pub fn implicitize_points<K: Field, R: Rng + ?Sized>(
    mut sample: impl FnMut(&mut R) -> [K; 3],
    max_degree: u32,
    rng: &mut R,
) -> Result<HomPoly3<K>> {
    for deg in 1..=max_degree {
        let n = monomial_count(deg);
        let mons = monomials(deg);
        let rows: Vec<Vec<K>> = (0..2 * n)
            .map(|_| {
                let mut p = sample(rng);
                if K::REGIME == Regime::Float {
                    let s = norm3(&p);
                    let inv = K::from_c64(C64::new(1.0 / s, 0.0)).expect("floating regime");
                    p = p.map(|x| x * inv.clone());
                }
                let pw: Vec<Vec<K>> = p.iter().map(|x| (0..=deg).map(|k| x.pow(k)).collect()).collect();
                mons.iter()
                    .map(|e| pw[0][e[0] as usize].clone() * pw[1][e[1] as usize].clone() * pw[2][e[2] as usize].clone())
                    .collect()
            })
            .collect();
        let m = DenseMatrix::from_rows(rows);
        let ker = K::kernel(&m, RANK_DROP_RATIO);
        if let Some(v) = ker.basis.into_iter().next() {
            let f = HomPoly3::from_terms(deg, &mons.iter().cloned().zip(v).collect::<Vec<_>>())?;
            return Ok(f.monic());
        }
    }
    Err(Error::NoCurveFound(max_degree))
}

/// Implicit equation of the image of `a ↦ [p0(a) : p1(a) : p2(a)]`.
/// Parameters are drawn from `K::sample`.
pub fn implicitize<K: Field, R: Rng + ?Sized>(
    param: &[BinForm<K>; 3],
    max_degree: u32,
    rng: &mut R,
) -> Result<HomPoly3<K>> {
    let d = param[0].degree();
    if param.iter().any(|b| b.degree() != d) {
        return Err(Error::DegreeMismatch("parameter components differ in degree".into()));
    }
    implicitize_points(
        |r: &mut R| {
            let a = [K::one(), K::sample(r)];
            [param[0].evaluate(&a), param[1].evaluate(&a), param[2].evaluate(&a)]
        },
        max_degree,
        rng,
    )
}
