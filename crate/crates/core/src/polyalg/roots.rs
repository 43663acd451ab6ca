//! Roots of binary forms with multiplicity.

use nalgebra::DMatrix;

use crate::field::{rationalize, Field, Regime, C64};
use crate::polyalg::binform::{BinForm, P1Point};
use crate::{Error, Result};

/// A root of a binary form. `point` is always available; `exact` holds the
/// same root in the form's own field when it could be represented there
/// (always for complex forms, for rational roots of rational forms).
#[derive(Clone, Debug)]
pub struct Root<K> {
    pub point: P1Point<C64>,
    pub exact: Option<P1Point<K>>,
    pub multiplicity: u32,
}

impl<K: Field> Root<K> {
    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

/// Eigenvalues of the companion matrix of `Σ c_i a^i` (nonzero leading
/// coefficient required).
pub fn companion_roots(c: &[C64]) -> Vec<C64> {
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    if n == 1 {
        return vec![-c[0] / lead];
    }
    let m = DMatrix::<C64>::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    // Bounded iteration count: the unbounded Schur iteration can stall on
    // companion matrices of multiple roots.
    match nalgebra::Schur::try_new(m, f64::EPSILON, 10_000).and_then(|s| s.eigenvalues()) {
        Some(ev) => ev.iter().cloned().collect(),
        None => aberth(c),
    }
}

fn horner(c: &[C64], x: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

/// Aberth–Ehrlich simultaneous iteration, used only if the Schur form does
/// not deliver eigenvalues.
fn aberth(c: &[C64]) -> Vec<C64> {
    let n = c.len() - 1;
    let radius = 1.0 + c[..n].iter().map(|x| (x / c[n]).norm()).fold(0.0, f64::max);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: C64 = (0..n).filter(|&j| j != i).map(|j| C64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (C64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn derivative(c: &[C64]) -> Vec<C64> {
    if c.len() <= 1 {
        return vec![C64::new(0.0, 0.0)];
    }
    c.iter().enumerate().skip(1).map(|(i, x)| x * i as f64).collect()
}

fn abs_scale(c: &[C64], x: C64) -> f64 {
    let r = x.norm();
    c.iter().enumerate().map(|(i, a)| a.norm() * r.powi(i as i32)).sum::<f64>()
}

fn newton_polish(c: &[C64], mut x: C64, steps: usize) -> C64 {
    let dc = derivative(c);
    for _ in 0..steps {
        let (p, _) = horner(c, x);
        let (dp, _) = horner(&dc, x);
        if dp.norm() == 0.0 {
            break;
        }
        let nx = x - p / dp;
        if horner(c, nx).0.norm() < p.norm() {
            x = nx;
        } else {
            break;
        }
    }
    x
}

/// Groups numerically coincident roots and certifies each group by the
/// vanishing of the lower derivatives at its polished center.
fn cluster(c: &[C64], raw: Vec<C64>) -> Vec<(C64, u32)> {
    let mut used = vec![false; raw.len()];
    let mut out = Vec::new();
    for i in 0..raw.len() {
        if used[i] {
            continue;
        }
        let group: Vec<usize> = (i..raw.len())
            .filter(|&j| !used[j] && (raw[j] - raw[i]).norm() <= 1e-4 * (1.0 + raw[i].norm()))
            .collect();
        let k = group.len();
        if k == 1 {
            used[i] = true;
            out.push((newton_polish(c, raw[i], 4), 1));
            continue;
        }
        let mut center = group.iter().map(|&j| raw[j]).sum::<C64>() / k as f64;
        let mut dk = c.to_vec();
        for _ in 0..k - 1 {
            dk = derivative(&dk);
        }
        center = newton_polish(&dk, center, 6);
        let mut ok = true;
        let mut dj = c.to_vec();
        for _ in 0..k {
            let v = horner(&dj, center).0.norm();
            if v > 1e-6 * abs_scale(&dj, center).max(f64::MIN_POSITIVE) {
                ok = false;
                break;
            }
            dj = derivative(&dj);
        }
        if ok {
            for &j in &group {
                used[j] = true;
            }
            out.push((center, k as u32));
        } else {
            used[i] = true;
            out.push((newton_polish(c, raw[i], 4), 1));
        }
    }
    out
}

fn sort_roots<K: Field>(roots: &mut [Root<K>]) {
    roots.sort_by(|a, b| {
        let ka = (a.point.is_infinity(), a.point.coords()[1].re, a.point.coords()[1].im);
        let kb = (b.point.is_infinity(), b.point.coords()[1].re, b.point.coords()[1].im);
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
}

/// All roots of a nonzero binary form, with multiplicities summing to the
/// degree.
///
/// Floating forms use companion-matrix eigenvalues with Newton polishing
/// and derivative-certified clustering of multiple roots. Exact forms are
/// first split into square-free parts; rational roots of each part are
/// recovered exactly and the rest are reported as floating approximations.
pub fn binary_roots<K: Field>(b: &BinForm<K>) -> Result<Vec<Root<K>>> {
    if b.is_zero() {
        return Err(Error::ZeroForm);
    }
    let mut out = Vec::new();
    match K::REGIME {
        Regime::Float => {
            let floor = 1e-14 * b.norm();
            let inf = b.infinity_order(floor);
            if inf > 0 {
                out.push(Root {
                    point: P1Point::infinity(),
                    exact: Some(P1Point::infinity()),
                    multiplicity: inf,
                });
            }
            let c: Vec<C64> = b.affine_part(floor).iter().map(|x| x.to_c64()).collect();
            for (r, m) in cluster(&c, companion_roots(&c)) {
                out.push(Root {
                    point: P1Point::affine(r),
                    exact: K::from_c64(r).map(P1Point::affine),
                    multiplicity: m,
                });
            }
        }
        Regime::Exact => {
            for (part, mult) in b.square_free_parts() {
                if part.degree() == 1 && part.coeffs()[1].is_negligible(0.0) {
                    out.push(Root {
                        point: P1Point::infinity(),
                        exact: Some(P1Point::infinity()),
                        multiplicity: mult,
                    });
                    continue;
                }
                let aff = part.affine_part(0.0);
                let c: Vec<C64> = aff.iter().map(|x| x.to_c64()).collect();
                let scale = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
                let c: Vec<C64> = c.iter().map(|x| x / scale).collect();
                for r in companion_roots(&c) {
                    let r = newton_polish(&c, r, 4);
                    let exact = (r.im.abs() <= 1e-7 * (1.0 + r.norm()))
                        .then(|| rationalize(r.re, 1_000_000))
                        .flatten()
                        .map(|q| K::from_rational(&q))
                        .filter(|q| {
                            let p = P1Point::affine(q.clone());
                            part.evaluate_at(&p).is_negligible(0.0)
                        });
                    out.push(Root {
                        point: P1Point::affine(r),
                        exact: exact.map(P1Point::affine),
                        multiplicity: mult,
                    });
                }
            }
        }
    }
    sort_roots(&mut out);
    Ok(out)
}

/// Expands `Π (vanishing form)^m` over the roots; used to check that a root
/// set reproduces a form up to scale.
pub fn expand_roots(roots: &[Root<impl Field>]) -> BinForm<C64> {
    roots.iter().fold(BinForm::constant(C64::new(1.0, 0.0)), |acc, r| {
        acc.mul(&r.point.vanishing_form().pow(r.multiplicity))
    })
}
