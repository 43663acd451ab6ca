//! Weierstrass theory for the lattice `Z + τZ`: ℘ and ℘′, the plane cubic
//! model, its flexes, and affine selfmaps `z ↦ mz + t` of the torus.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;

use crate::curves::{ComponentParam, CurveFamily, DualCurve, WebComponent, WebSpec};
use crate::field::{Field, C64};
use crate::polyalg::{implicitize_points, HomPoly3};
use crate::projgeom::{collinear, ProjPoint};
use crate::{Error, Result};

/// Lattice-normalized distance below which a point counts as a lattice
/// point.
pub const LATTICE_TOL: f64 = 1e-9;

const GRID: usize = 48;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `csc²(πw)`.
fn csc2(w: C64) -> C64 {
    let s = (w * PI).sin();
    C64::new(1.0, 0.0) / (s * s)
}

#[derive(Clone, Debug)]
pub struct Lattice {
    tau: C64,
    rows: i64,
    g2: C64,
    g3: C64,
    /// `(z, ℘(z))` on a grid of the centered fundamental domain, for
    /// initial guesses when inverting ℘.
    grid: Arc<Vec<(C64, C64)>>,
}

/// A point of `C/Λ`, stored by its coordinates `z = x + yτ` with
/// `x, y ∈ [0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusPoint {
    x: f64,
    y: f64,
    z: C64,
}

fn frac(v: f64) -> f64 {
    let f = v - v.floor();
    if f >= 1.0 - 1e-15 {
        0.0
    } else {
        f
    }
}

/// Distance from `v` to the nearest integer.
fn int_dist(v: f64) -> f64 {
    (v - v.round()).abs()
}

impl TorusPoint {
    pub fn new(z: C64, lattice: &Lattice) -> Self {
        let (x, y) = lattice.coordinates(z);
        let (x, y) = (frac(x), frac(y));
        Self { x, y, z: c(x) + lattice.tau * y }
    }

    /// Lattice coordinates in `[0, 1)²`.
    pub fn coords(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    pub fn z(&self) -> C64 {
        self.z
    }

    /// Representative with coordinates in `[-1/2, 1/2)`.
    pub fn centered(&self, lattice: &Lattice) -> C64 {
        let cx = if self.x >= 0.5 { self.x - 1.0 } else { self.x };
        let cy = if self.y >= 0.5 { self.y - 1.0 } else { self.y };
        c(cx) + lattice.tau * cy
    }

    /// Distance to the lattice in lattice coordinates.
    pub fn lattice_distance(&self) -> f64 {
        int_dist(self.x).hypot(int_dist(self.y))
    }

    pub fn is_origin(&self) -> bool {
        self.lattice_distance() < LATTICE_TOL
    }
}

impl Lattice {
    pub fn new(tau: C64) -> Result<Self> {
        if !(tau.im > 0.0) || !tau.re.is_finite() {
            return Err(Error::InvalidArgument(format!("tau must have positive imaginary part, got {tau}")));
        }
        // Row sums decay like exp(-2π m Im τ); stop below double precision.
        let rows = (40.0 / (2.0 * PI * tau.im)).ceil() as i64 + 1;
        let mut l = Self { tau, rows, g2: c(0.0), g3: c(0.0), grid: Arc::new(Vec::new()) };
        let (g4, g6) = l.eisenstein();
        l.g2 = g4 * 60.0;
        l.g3 = g6 * 140.0;
        let disc = l.g2.powu(3) - l.g3 * l.g3 * 27.0;
        if disc.norm() <= 1e-9 * (l.g2.norm().powi(3) + 27.0 * l.g3.norm_sqr()) {
            return Err(Error::InvalidArgument("degenerate lattice: vanishing discriminant".into()));
        }
        let mut grid = Vec::with_capacity(GRID * GRID);
        for i in 0..GRID {
            for j in 0..GRID {
                let x = (i as f64 + 0.5) / GRID as f64 - 0.5;
                let y = (j as f64 + 0.5) / GRID as f64 - 0.5;
                let z = c(x) + tau * y;
                grid.push((z, l.wp_raw(z).0));
            }
        }
        l.grid = Arc::new(grid);
        Ok(l)
    }

    /// The square lattice `τ = i`.
    pub fn square() -> Self {
        Self::new(C64::new(0.0, 1.0)).expect("square lattice is nondegenerate")
    }

    pub fn tau(&self) -> C64 {
        self.tau
    }

    pub fn g2(&self) -> C64 {
        self.g2
    }

    pub fn g3(&self) -> C64 {
        self.g3
    }

    /// `(x, y)` with `z = x + yτ`.
    pub fn coordinates(&self, z: C64) -> (f64, f64) {
        let y = z.im / self.tau.im;
        (z.re - y * self.tau.re, y)
    }

    pub fn point(&self, z: C64) -> TorusPoint {
        TorusPoint::new(z, self)
    }

    pub fn from_coordinates(&self, x: f64, y: f64) -> TorusPoint {
        self.point(c(x) + self.tau * y)
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> TorusPoint {
        self.from_coordinates(rng.random::<f64>(), rng.random::<f64>())
    }

    /// `(G4, G6)` by row summation: the row `m = 0` contributes `2ζ(4)`,
    /// `2ζ(6)`; row `m` contributes closed forms in `X = csc²(πmτ)`.
    fn eisenstein(&self) -> (C64, C64) {
        let p4 = PI.powi(4);
        let p6 = PI.powi(6);
        let mut g4 = c(p4 / 45.0);
        let mut g6 = c(2.0 * p6 / 945.0);
        for m in 1..=self.rows {
            for s in [-1.0, 1.0] {
                let x = csc2(self.tau * (m as f64 * s));
                g4 += (x * x * 3.0 - x * 2.0) * (p4 / 3.0);
                g6 += (x * x * x - x * x + x * (2.0 / 15.0)) * p6;
            }
        }
        (g4, g6)
    }

    /// ℘ and ℘′ at an arbitrary complex `z` (not reduced).
    fn wp_raw(&self, z: C64) -> (C64, C64) {
        let p2 = PI * PI;
        let mut wp = c(-p2 / 3.0);
        let mut dwp = c(0.0);
        for m in -self.rows..=self.rows {
            let w = (z - self.tau * m as f64) * PI;
            let s = w.sin();
            let s2 = s * s;
            wp += c(p2) / s2;
            dwp += w.cos() / (s2 * s) * (-2.0 * PI.powi(3));
            if m != 0 {
                wp -= csc2(self.tau * m as f64) * p2;
            }
        }
        (wp, dwp)
    }

    /// `(℘(z), ℘′(z))`.
    pub fn wp(&self, z: &TorusPoint) -> Result<(C64, C64)> {
        if z.is_origin() {
            return Err(Error::AtOrigin);
        }
        Ok(self.wp_raw(z.centered(self)))
    }

    /// `℘″ = 6℘² − g2/2`.
    pub fn wp_second(&self, wp: C64) -> C64 {
        wp * wp * 6.0 - self.g2 / 2.0
    }

    /// Equation of the plane model `v²w = 4u³ − g2 uw² − g3 w³`.
    pub fn cubic(&self) -> HomPoly3<C64> {
        HomPoly3::from_terms(
            3,
            &[([3, 0, 0], c(4.0)), ([1, 0, 2], -self.g2), ([0, 0, 3], -self.g3), ([0, 2, 1], c(-1.0))],
        )
        .expect("degree-3 monomials")
    }

    /// `[℘ : ℘′ : 1]`, or the flex `[0:1:0]` at the origin.
    pub fn embed(&self, z: &TorusPoint) -> ProjPoint<C64> {
        match self.wp(z) {
            Ok((p, dp)) => ProjPoint::new(p, dp, c(1.0)).expect("finite values"),
            Err(_) => ProjPoint::new(c(0.0), c(1.0), c(0.0)).unwrap(),
        }
    }

    /// Dual point of the tangent line at `embed(z)`:
    /// `[−℘″ : ℘′ : ℘℘″ − ℘′²]`, and `[0:0:1]` at the origin.
    pub fn tangent_dual(&self, z: &TorusPoint) -> ProjPoint<C64> {
        match self.wp(z) {
            Ok((p, dp)) => {
                let dd = self.wp_second(p);
                ProjPoint::new(-dd, dp, p * dd - dp * dp).expect("smooth cubic has tangents")
            }
            Err(_) => ProjPoint::new(c(0.0), c(0.0), c(1.0)).unwrap(),
        }
    }

    /// The torus point over a point of the plane cubic: Newton on
    /// `℘(z) = u/w` (or on `1/℘` for large values) from the cached grid,
    /// then the sign of `z` fixed by `℘′(z) = v/w`.
    pub fn invert(&self, p: &ProjPoint<C64>) -> Result<TorusPoint> {
        let r = self.cubic().relative_residual(p);
        if r > 1e-6 {
            return Err(Error::NotOnCurve(r));
        }
        let [u, v, w] = *p.coords();
        let scale = u.norm().max(v.norm()).max(w.norm());
        if w.norm() <= 1e-12 * scale {
            return Ok(self.point(c(0.0)));
        }
        let (uu, vv) = (u / w, v / w);
        let mut cands: Vec<&(C64, C64)> = self.grid.iter().collect();
        let key = |g: &(C64, C64)| {
            if uu.norm() > 1.0 {
                (C64::new(1.0, 0.0) / g.1 - C64::new(1.0, 0.0) / uu).norm()
            } else {
                (g.1 - uu).norm()
            }
        };
        cands.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
        for start in cands.iter().take(6) {
            let mut z = start.0;
            let mut ok = false;
            for _ in 0..60 {
                let (wp, dwp) = self.wp_raw(z);
                let step = if uu.norm() > 1.0 {
                    // h = 1/℘ − 1/U, h′ = −℘′/℘²
                    (C64::new(1.0, 0.0) / wp - C64::new(1.0, 0.0) / uu) / (-dwp / (wp * wp))
                } else {
                    (wp - uu) / dwp
                };
                if !step.is_finite() {
                    break;
                }
                z -= step;
                if step.norm() < 1e-15 * (1.0 + z.norm()) {
                    ok = true;
                    break;
                }
            }
            let (wp, dwp) = self.wp_raw(z);
            let rel = (wp - uu).norm() / (1.0 + uu.norm());
            if !(ok || rel < 1e-10) || !(rel < 1e-8) {
                continue;
            }
            let vs = (1.0 + vv.norm()).max(1.0);
            let t = if (dwp - vv).norm() / vs <= (dwp + vv).norm() / vs { z } else { -z };
            return Ok(self.point(t));
        }
        Err(Error::NotOnCurve(r))
    }

    /// The nine 3-torsion points `(j + kτ)/3`.
    pub fn flexes(&self) -> Vec<TorusPoint> {
        let mut out = Vec::with_capacity(9);
        for j in 0..3 {
            for k in 0..3 {
                out.push(self.from_coordinates(j as f64 / 3.0, k as f64 / 3.0));
            }
        }
        out
    }

    /// The three nonzero 2-torsion points.
    pub fn half_periods(&self) -> [TorusPoint; 3] {
        [self.from_coordinates(0.5, 0.0), self.from_coordinates(0.0, 0.5), self.from_coordinates(0.5, 0.5)]
    }

    /// `a + b` on the torus.
    pub fn add(&self, a: &TorusPoint, b: &TorusPoint) -> TorusPoint {
        self.from_coordinates(a.x + b.x, a.y + b.y)
    }

    pub fn neg(&self, a: &TorusPoint) -> TorusPoint {
        self.from_coordinates(-a.x, -a.y)
    }

    /// Implicit equation of the dual curve (the sextic of tangent lines),
    /// fitted from sampled tangent duals, with the largest relative
    /// residual at `held_out` fresh parameters.
    pub fn dual_curve<R: Rng + ?Sized>(&self, held_out: usize, rng: &mut R) -> Result<(HomPoly3<C64>, f64)> {
        let f = implicitize_points(
            |r: &mut R| *self.tangent_dual(&random_away_from_origin(self, 0.05, r)).coords(),
            6,
            rng,
        )?;
        let residual = (0..held_out)
            .map(|_| f.relative_residual(&self.tangent_dual(&self.random_point(rng))))
            .fold(0.0, f64::max);
        Ok((f, residual))
    }

    /// The web of tangent-free lines `𝒟c`, `c` on the plane cubic.
    pub fn web(&self) -> WebSpec<C64> {
        let curve = DualCurve::new(self.cubic(), CurveFamily::SmoothCubic, Vec::new()).expect("nonzero cubic");
        WebSpec::new(vec![WebComponent { curve, param: ComponentParam::Elliptic(self.clone()) }])
            .expect("single component")
    }
}

/// Outcome of `collinear_sum_check`.
#[derive(Clone, Copy, Debug)]
pub struct CollinearSum {
    /// `z1 + z2 + z3 ∈ Λ`.
    pub sum_in_lattice: bool,
    /// Determinant of the unit-normalized embedded points.
    pub determinant: f64,
}

impl CollinearSum {
    pub fn agree(&self, tol: f64) -> bool {
        self.sum_in_lattice == (self.determinant < tol)
    }
}

pub fn collinear_sum_check(l: &Lattice, z: [&TorusPoint; 3]) -> Result<CollinearSum> {
    let p = z.map(|t| l.embed(t));
    for i in 0..3 {
        for j in i + 1..3 {
            if p[i].distance(&p[j]) < 1e-9 {
                return Err(Error::DegenerateTriple);
            }
        }
    }
    let s = l.add(&l.add(z[0], z[1]), z[2]);
    let (_, det) = collinear(&p[0], &p[1], &p[2], 0.0);
    Ok(CollinearSum { sum_in_lattice: s.lattice_distance() < LATTICE_TOL, determinant: det })
}

/// `z ↦ mz + t` on `C/Λ`.
#[derive(Clone, Debug)]
pub struct EllipticEndo {
    lattice: Lattice,
    m: i64,
    t: TorusPoint,
}

impl EllipticEndo {
    /// Requires `|m| >= 2` and `3t ∈ Λ` (a flex translation).
    pub fn new(lattice: Lattice, m: i64, t: TorusPoint) -> Result<Self> {
        let g = Self::with_translation(lattice, m, t)?;
        let t3 = g.lattice.from_coordinates(3.0 * t.x, 3.0 * t.y);
        if t3.lattice_distance() > LATTICE_TOL {
            return Err(Error::InvalidArgument("translation is not a flex (3t not in the lattice)".into()));
        }
        Ok(g)
    }

    /// Any translation; such maps need not preserve collinearity.
    pub fn with_translation(lattice: Lattice, m: i64, t: TorusPoint) -> Result<Self> {
        if m.abs() < 2 {
            return Err(Error::InvalidDegree(format!("multiplier {m} has |m| < 2")));
        }
        Ok(Self { lattice, m, t })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn multiplier(&self) -> i64 {
        self.m
    }

    pub fn translation(&self) -> TorusPoint {
        self.t
    }

    /// Topological degree `m²`, also the algebraic degree of the induced
    /// plane map.
    pub fn degree(&self) -> u32 {
        (self.m * self.m) as u32
    }

    pub fn apply(&self, z: &TorusPoint) -> TorusPoint {
        let m = self.m as f64;
        self.lattice.from_coordinates(m * z.x + self.t.x, m * z.y + self.t.y)
    }

    /// The `m²` preimages `(w − t + j + kτ)/m`.
    pub fn preimages(&self, w: &TorusPoint) -> Vec<TorusPoint> {
        let m = self.m as f64;
        let n = self.m.unsigned_abs();
        let (bx, by) = (w.x - self.t.x, w.y - self.t.y);
        let mut out = Vec::with_capacity((n * n) as usize);
        for j in 0..n {
            for k in 0..n {
                out.push(self.lattice.from_coordinates((bx + j as f64) / m, (by + k as f64) / m));
            }
        }
        out
    }
}

/// A random point of `C/Λ` at lattice-normalized distance at least
/// `margin` from the lattice.
pub fn random_away_from_origin<R: Rng + ?Sized>(l: &Lattice, margin: f64, rng: &mut R) -> TorusPoint {
    loop {
        let z = l.random_point(rng);
        if z.lattice_distance() >= margin {
            return z;
        }
    }
}

/// Standard normal sample, used for generic complex parameters.
pub fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::sample(rng)
}

#[cfg(test)]
mod tests {
    #[test]
    fn dual_of_square_cubic_is_sextic() {
        let l = Lattice::square();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (f, r) = l.dual_curve(50, &mut rng).unwrap();
        assert_eq!(f.degree(), 6);
        assert!(r < 1e-6, "held-out residual {r}");
    }

    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: plain lattice-disk summation of the Eisenstein
    /// series, radius 30.
    fn disk_eisenstein(tau: C64, radius: i64) -> (C64, C64) {
        let mut g4 = c(0.0);
        let mut g6 = c(0.0);
        for m in -radius..=radius {
            for n in -radius..=radius {
                if (m, n) == (0, 0) {
                    continue;
                }
                let w = c(n as f64) + tau * m as f64;
                if w.norm() > radius as f64 {
                    continue;
                }
                g4 += w.powi(-4);
                g6 += w.powi(-6);
            }
        }
        (g4 * 60.0, g6 * 140.0)
    }

    /// Independent oracle: disk summation of ℘ with the z⁻² correction.
    fn disk_wp(z: C64, tau: C64, radius: i64) -> C64 {
        let mut s = z.powi(-2);
        for m in -radius..=radius {
            for n in -radius..=radius {
                if (m, n) == (0, 0) {
                    continue;
                }
                let w = c(n as f64) + tau * m as f64;
                s += (z - w).powi(-2) - w.powi(-2);
            }
        }
        s
    }

    #[test]
    fn invariants_match_disk_sums() {
        for tau in [C64::new(0.0, 1.0), C64::new(0.3, 0.9), C64::new(-0.5, 3f64.sqrt() / 2.0)] {
            let l = Lattice::new(tau).unwrap();
            let (g2, g3) = disk_eisenstein(tau, 30);
            // The truncated disk sum is accurate to about 1e-2 here.
            assert!((l.g2() - g2).norm() < 1e-2, "{tau}: {} vs {g2}", l.g2());
            assert!((l.g3() - g3).norm() < 1e-2, "{tau}: {} vs {g3}", l.g3());
        }
        let sq = Lattice::square();
        assert!(sq.g3().norm() < 1e-10);
        assert!((sq.g2().re - 189.07272045831_f64).abs() < 1e-6);
    }

    #[test]
    fn wp_matches_disk_sum_and_ode() {
        let l = Lattice::new(C64::new(0.2, 1.1)).unwrap();
        let z = C64::new(0.31, 0.17);
        let (wp, dwp) = l.wp(&l.point(z)).unwrap();
        assert!((wp - disk_wp(z, l.tau(), 200)).norm() < 1e-3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let t = random_away_from_origin(&l, 0.05, &mut rng);
            let (p, dp) = l.wp(&t).unwrap();
            let lhs = dp * dp;
            let rhs = p.powu(3) * 4.0 - l.g2() * p - l.g3();
            assert!((lhs - rhs).norm() < 1e-8 * (1.0 + lhs.norm()));
        }
        let _ = dwp;
    }

    #[test]
    fn parity_and_half_periods() {
        let l = Lattice::square();
        let z = l.point(C64::new(0.23, 0.41));
        let (a, da) = l.wp(&z).unwrap();
        let (b, db) = l.wp(&l.neg(&z)).unwrap();
        assert!((a - b).norm() < 1e-10 && (da + db).norm() < 1e-10);
        for h in l.half_periods() {
            assert!(l.wp(&h).unwrap().1.norm() < 1e-9);
        }
        assert!(matches!(l.wp(&l.point(c(1.0))), Err(Error::AtOrigin)));
    }

    #[test]
    fn embedding_and_inversion_round_trip() {
        let l = Lattice::new(C64::new(0.1, 1.3)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let z = random_away_from_origin(&l, 0.02, &mut rng);
            let p = l.embed(&z);
            assert!(l.cubic().relative_residual(&p) < 1e-10);
            let back = l.invert(&p).unwrap();
            let d = l.add(&back, &l.neg(&z));
            assert!(d.lattice_distance() < 1e-8, "{:?} vs {:?}", back, z);
        }
        assert!(l.invert(&l.embed(&l.point(c(0.0)))).unwrap().is_origin());
    }

    #[test]
    fn collinearity_is_the_group_law() {
        let l = Lattice::square();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = random_away_from_origin(&l, 0.05, &mut rng);
        let o = l.point(c(0.0));
        let r = collinear_sum_check(&l, [&z, &l.neg(&z), &o]).unwrap();
        assert!(r.sum_in_lattice && r.determinant < 1e-9);
        let mut agree = 0;
        for _ in 0..200 {
            let a = random_away_from_origin(&l, 0.05, &mut rng);
            let b = random_away_from_origin(&l, 0.05, &mut rng);
            let third = l.neg(&l.add(&a, &b));
            let r = collinear_sum_check(&l, [&a, &b, &third]).unwrap();
            assert!(r.sum_in_lattice && r.determinant < 1e-6);
            let other = random_away_from_origin(&l, 0.05, &mut rng);
            let r = collinear_sum_check(&l, [&a, &b, &other]).unwrap();
            if r.agree(1e-6) {
                agree += 1;
            }
        }
        assert_eq!(agree, 200);
    }

    #[test]
    fn flexes_have_triple_tangency() {
        let l = Lattice::square();
        let f = l.flexes();
        assert_eq!(f.len(), 9);
        assert!(f.iter().any(|p| p.is_origin()));
        for p in &f {
            let p3 = l.from_coordinates(3.0 * p.coords().0, 3.0 * p.coords().1);
            assert!(p3.is_origin());
            let tangent = l.tangent_dual(p).dualize();
            let (form, _) = crate::polyalg::restrict_to_line(&l.cubic(), &tangent);
            let roots = crate::polyalg::binary_roots(&form).unwrap();
            assert_eq!(roots.len(), 1, "flex {:?}", p.coords());
            assert_eq!(roots[0].multiplicity, 3);
        }
    }

    #[test]
    fn endomorphisms() {
        let l = Lattice::square();
        let g = EllipticEndo::new(l.clone(), 2, l.point(c(0.0))).unwrap();
        assert_eq!(g.degree(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let w = l.random_point(&mut rng);
        let pre = g.preimages(&w);
        assert_eq!(pre.len(), 4);
        for z in &pre {
            assert!(l.add(&g.apply(z), &l.neg(&w)).lattice_distance() < 1e-12);
        }
        assert!(EllipticEndo::new(l.clone(), 2, l.from_coordinates(0.1, 0.0)).is_err());
        assert!(EllipticEndo::new(l.clone(), 1, l.point(c(0.0))).is_err());
    }
}
