//! Recovery of a polynomial plane map from point correspondences.

use nalgebra::DMatrix;

use crate::field::C64;
use crate::polyalg::endo::EndoP2;
use crate::polyalg::hompoly::{monomial_count, monomials, HomPoly3};
use crate::projgeom::{cross, norm3, ProjPoint};
use crate::{Error, Result};

/// Result of `interpolate_endo`.
#[derive(Clone, Debug)]
pub struct Interpolation {
    pub map: EndoP2<C64>,
    /// Largest `|q × f(p)| / |f(p)|` over the samples (unit `q`).
    pub max_residual: f64,
    /// Smallest and second smallest singular values, relative to the largest.
    pub singular_gap: (f64, f64),
}

/// Fits `f` of degree `d` with `f(p_i) ∝ q_i` from the linear conditions
/// `q_i × f(p_i) = 0`. Needs at least `3 N_d` samples. The coefficient
/// vector is the right singular vector of the smallest singular value,
/// scaled so the largest coefficient is 1.
pub fn interpolate_endo(
    samples: &[(ProjPoint<C64>, ProjPoint<C64>)],
    d: u32,
    tol: f64,
) -> Result<Interpolation> {
    let m = monomial_count(d);
    if samples.len() < 3 * m {
        return Err(Error::RankDeficient(format!(
            "{} samples, need at least {}",
            samples.len(),
            3 * m
        )));
    }
    let mons = monomials(d);
    let eval_mons = |p: &[C64; 3]| -> Vec<C64> {
        mons.iter()
            .map(|e| p[0].powu(e[0]) * p[1].powu(e[1]) * p[2].powu(e[2]))
            .collect()
    };
    let unknowns = 3 * m;
    let rows = (3 * samples.len()).max(unknowns);
    let mut a = DMatrix::<C64>::zeros(rows, unknowns);
    for (s, (p, q)) in samples.iter().enumerate() {
        let mv = eval_mons(&p.unit_c64());
        let q = q.unit_c64();
        // (q × f)_k = q_{k+1} f_{k+2} - q_{k+2} f_{k+1}
        for k in 0..3 {
            let (i1, i2) = ((k + 1) % 3, (k + 2) % 3);
            for (t, v) in mv.iter().enumerate() {
                a[(3 * s + k, i2 * m + t)] += q[i1] * v;
                a[(3 * s + k, i1 * m + t)] -= q[i2] * v;
            }
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let sv = &svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&x, &y| sv[x].partial_cmp(&sv[y]).unwrap());
    let smax = sv[order[sv.len() - 1]].max(f64::MIN_POSITIVE);
    let gap = (sv[order[0]] / smax, sv[order[1]] / smax);
    if gap.1 < 1e-9 {
        return Err(Error::RankDeficient(format!(
            "solution not unique: second smallest singular value ratio {:.3e}",
            gap.1
        )));
    }
    let mut coef: Vec<C64> = v_t.row(order[0]).iter().map(|z| z.conj()).collect();
    let big = coef
        .iter()
        .cloned()
        .max_by(|x, y| x.norm().partial_cmp(&y.norm()).unwrap())
        .unwrap();
    for c in coef.iter_mut() {
        *c /= big;
    }
    let comps: [HomPoly3<C64>; 3] = [0, 1, 2].map(|k| {
        HomPoly3::from_terms(d, &mons.iter().cloned().zip(coef[k * m..(k + 1) * m].iter().cloned()).collect::<Vec<_>>())
            .expect("degree-d monomials")
    });
    let mut max_residual = 0.0f64;
    for (p, q) in samples {
        let pu = p.unit_c64();
        let f = [comps[0].evaluate(&pu), comps[1].evaluate(&pu), comps[2].evaluate(&pu)];
        let nf = norm3(&f);
        let r = if nf == 0.0 { f64::INFINITY } else { norm3(&cross(&q.unit_c64(), &f)) / nf };
        max_residual = max_residual.max(r);
    }
    if !(max_residual <= tol) {
        return Err(Error::ResidualTooLarge { residual: max_residual, tolerance: tol });
    }
    let map = EndoP2::with_any_degree(comps)?;
    Ok(Interpolation { map, max_residual, singular_gap: gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::polyalg::endo::PlaneMap;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_points(n: usize, seed: u64) -> Vec<ProjPoint<C64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| ProjPoint::new(C64::sample(&mut rng), C64::sample(&mut rng), C64::sample(&mut rng)).unwrap())
            .collect()
    }

    #[test]
    fn recovers_nodal_f2() {
        let f = EndoP2::new([
            HomPoly3::from_int_terms(2, &[([2, 0, 0], 1), ([0, 1, 1], -2)]).unwrap(),
            HomPoly3::from_int_terms(2, &[([0, 2, 0], 1), ([1, 0, 1], -2)]).unwrap(),
            HomPoly3::from_int_terms(2, &[([0, 0, 2], 1)]).unwrap(),
        ])
        .unwrap();
        let samples: Vec<_> = random_points(40, 5).into_iter().map(|p| (p.clone(), f.apply(&p).unwrap())).collect();
        let fit = interpolate_endo(&samples, 2, 1e-10).unwrap();
        assert!(fit.max_residual < 1e-10);
        let scale = *fit.map.components()[2].coeff([0, 0, 2]);
        for k in 0..3 {
            let got = fit.map.components()[k].scale(&(C64::new(1.0, 0.0) / scale));
            assert!(got.sub(&f.components()[k]).unwrap().norm() < 1e-9);
        }
    }

    #[test]
    fn identity_in_degree_one() {
        let samples: Vec<_> = random_points(12, 6).into_iter().map(|p| (p.clone(), p)).collect();
        let fit = interpolate_endo(&samples, 1, 1e-10).unwrap();
        let c = fit.map.components();
        assert!(c[0].coeff([0, 1, 0]).norm() < 1e-10);
        assert!((c[0].coeff([1, 0, 0]) - c[1].coeff([0, 1, 0])).norm() < 1e-10);
    }

    #[test]
    fn inconsistent_samples_fail() {
        let a = random_points(40, 7);
        let b = random_points(40, 8);
        let samples: Vec<_> = a.into_iter().zip(b).collect();
        assert!(matches!(interpolate_endo(&samples, 2, 1e-8), Err(Error::ResidualTooLarge { .. })));
        assert!(matches!(interpolate_endo(&samples[..5], 2, 1e-8), Err(Error::RankDeficient(_))));
    }
}
