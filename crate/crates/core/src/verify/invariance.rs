//! Invariance of a web, the induced map on its curve, and the degree of
//! the restriction of a map to a web line.

use rand::Rng;

use crate::curves::{common_factor, WebSpec};
use crate::field::{Field, Regime};
use crate::linalg::DenseMatrix;
use crate::polyalg::{BinForm, EndoP2, HomPoly3, PlaneMap};
use crate::projgeom::{dot, join, ProjLine, ProjPoint};
use crate::verify::report::{CheckConfig, VerificationReport};
use crate::{Error, Result};

const SAMPLE_ATTEMPTS: usize = 20;
/// Largest relative residual for a point to count as lying on the web curve.
pub const ON_CURVE_TOL: f64 = 1e-6;

/// `|l · p|` on unit representatives; exact zero or a positive value in the
/// exact regime.
pub fn incidence_residual<K: Field>(l: &ProjLine<K>, p: &ProjPoint<K>) -> f64 {
    match K::REGIME {
        Regime::Exact => {
            let v = dot(l.coords(), p.coords());
            if v.is_negligible(0.0) {
                0.0
            } else {
                dot(&l.unit_c64(), &p.unit_c64()).norm().max(f64::MIN_POSITIVE)
            }
        }
        Regime::Float => dot(&l.unit_c64(), &p.unit_c64()).norm(),
    }
}

/// `|F(p)| / ‖F‖` on the unit representative; exact zero or a positive
/// value in the exact regime.
pub fn curve_residual<K: Field>(f: &HomPoly3<K>, p: &ProjPoint<K>) -> f64 {
    match K::REGIME {
        Regime::Exact => {
            if f.evaluate_at(p).is_negligible(0.0) {
                0.0
            } else {
                f.relative_residual(p).max(f64::MIN_POSITIVE)
            }
        }
        Regime::Float => f.relative_residual(p),
    }
}

/// A random point of a line.
pub fn sample_on_line<K: Field, R: Rng + ?Sized>(l: &ProjLine<K>, rng: &mut R) -> Result<ProjPoint<K>> {
    let [b0, b1] = l.basis();
    let (s, t) = (K::sample(rng), K::sample(rng));
    let (u, v) = (b0.coords(), b1.coords());
    ProjPoint::from_array([0, 1, 2].map(|i| s.clone() * u[i].clone() + t.clone() * v[i].clone()))
}

fn mapped_sample<K: Field, M: PlaneMap<K> + ?Sized, R: Rng + ?Sized>(
    f: &M,
    l: &ProjLine<K>,
    rng: &mut R,
) -> Result<ProjPoint<K>> {
    let mut last = Error::DegenerateRestriction;
    for _ in 0..SAMPLE_ATTEMPTS {
        match sample_on_line(l, rng).and_then(|p| f.apply(&p)) {
            Ok(q) => return Ok(q),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// The line through the images of two sampled points of `l`, and the
/// largest incidence residual of `confirm` further images.
#[derive(Clone, Debug)]
pub struct ImageLine<K> {
    pub line: ProjLine<K>,
    pub collinearity: f64,
}

pub fn image_line<K: Field, M: PlaneMap<K> + ?Sized, R: Rng + ?Sized>(
    f: &M,
    l: &ProjLine<K>,
    confirm: usize,
    rng: &mut R,
) -> Result<ImageLine<K>> {
    let join_tol = match K::REGIME {
        Regime::Exact => 0.0,
        Regime::Float => 1e-9,
    };
    let mut line = None;
    for _ in 0..SAMPLE_ATTEMPTS {
        let p = mapped_sample(f, l, rng)?;
        let q = mapped_sample(f, l, rng)?;
        if let Ok(m) = join(&p, &q, join_tol) {
            line = Some(m);
            break;
        }
    }
    let line = line.ok_or(Error::DegenerateRestriction)?;
    let mut collinearity = 0.0f64;
    for _ in 0..confirm {
        let p = mapped_sample(f, l, rng)?;
        collinearity = collinearity.max(incidence_residual(&line, &p));
    }
    Ok(ImageLine { line, collinearity })
}

/// `g(c)` for the map `g = 𝒟 ∘ f ∘ 𝒟` induced on the web curve.
#[derive(Clone, Debug)]
pub struct InducedImage<K> {
    pub point: ProjPoint<K>,
    /// Residual of the web curve at the image.
    pub curve_residual: f64,
}

/// Maps `c ∈ C` through `f` by sampling two pairs of points on `𝒟c`.
/// The two image lines must agree within `tol` (exactly in the exact
/// regime).
pub fn induced_map_on_c<K: Field, M: PlaneMap<K> + ?Sized, R: Rng + ?Sized>(
    f: &M,
    web: &WebSpec<K>,
    c: &ProjPoint<K>,
    tol: f64,
    rng: &mut R,
) -> Result<InducedImage<K>> {
    let eq = web.curve().equation();
    let r = curve_residual(eq, c);
    if r > ON_CURVE_TOL || (K::REGIME == Regime::Exact && r > 0.0) {
        return Err(Error::NotOnCurve(r));
    }
    let l = c.dualize();
    let a = image_line(f, &l, 0, rng)?.line;
    let b = image_line(f, &l, 0, rng)?.line;
    let spread = match K::REGIME {
        Regime::Exact => {
            if a.same(&b, 0.0) {
                0.0
            } else {
                a.distance(&b).max(f64::MIN_POSITIVE)
            }
        }
        Regime::Float => a.distance(&b),
    };
    if spread > tol {
        return Err(Error::InconsistentImage(spread));
    }
    let point = a.dualize();
    let curve_residual = curve_residual(eq, &point);
    Ok(InducedImage { point, curve_residual })
}

/// For `samples` points `c` drawn from the components in turn, the image
/// of `𝒟c` must be a line (five extra collinearity confirmations) whose
/// dual lies on the web curve.
pub fn check_invariance<K: Field, M: PlaneMap<K> + ?Sized>(
    f: &M,
    web: &WebSpec<K>,
    cfg: &CheckConfig,
) -> VerificationReport {
    let mut rng = cfg.rng("invariance");
    let tol = cfg.tol_for::<K>();
    let mut report = VerificationReport::new("invariance", cfg, f.algebraic_degree(), tol);
    let eq = web.curve().equation();
    let n = web.components().len();
    let mut collinear = vec![0.0f64; n];
    let mut on_curve = vec![0.0f64; n];
    let mut errors: Vec<Vec<String>> = vec![Vec::new(); n];
    for k in 0..cfg.samples {
        let i = k % n;
        let outcome = web.components()[i].sample(&mut rng).and_then(|c| image_line(f, &c.dualize(), 5, &mut rng));
        match outcome {
            Ok(img) => {
                collinear[i] = collinear[i].max(img.collinearity);
                on_curve[i] = on_curve[i].max(curve_residual(eq, &img.line.dualize()));
            }
            Err(e) => errors[i].push(e.to_string()),
        }
    }
    for i in 0..n {
        let name = web.components()[i].curve.family().to_string();
        report.measure(format!("component {i} ({name}): image collinearity"), collinear[i], None);
        report.measure(format!("component {i} ({name}): image dual on curve"), on_curve[i], None);
        if !errors[i].is_empty() {
            report.failure(
                format!("component {i} ({name}): evaluation"),
                format!("{} samples failed; first: {}", errors[i].len(), errors[i][0]),
            );
        }
    }
    report.samples = cfg.samples;
    report
}

/// Degree of `f` restricted to `𝒟c` as a map onto its image line.
pub fn pushforward_degree<K: Field>(f: &EndoP2<K>, c: &ProjPoint<K>) -> Result<u32> {
    let [b0, b1] = c.dualize().basis();
    let subs = [0, 1, 2].map(|i| BinForm::from_coeffs(vec![b0.coords()[i].clone(), b1.coords()[i].clone()]));
    let forms: Vec<BinForm<K>> = f.components().iter().map(|h| h.substitute_binary(&subs)).collect::<Result<_>>()?;
    let d = f.degree() as usize;
    // Linear relations Σ l_j F_j = 0 cut out the image line.
    let m = DenseMatrix::from_rows((0..=d).map(|t| (0..3).map(|j| forms[j].coeffs()[t].clone()).collect()).collect());
    let ker = K::kernel(&m, 1e-9);
    if ker.basis.len() != 1 {
        return Err(Error::DegenerateRestriction);
    }
    let v = &ker.basis[0];
    let target = ProjLine::from_array([v[0].clone(), v[1].clone(), v[2].clone()])?;
    let [e0, e1] = target.basis();
    let (e0, e1) = (e0.coords(), e1.coords());
    let minor = |i: usize, k: usize| e0[i].clone() * e1[k].clone() - e1[i].clone() * e0[k].clone();
    let (i, k) = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .max_by(|a, b| minor(a.0, a.1).abs_f64().partial_cmp(&minor(b.0, b.1).abs_f64()).unwrap())
        .unwrap();
    let det = minor(i, k);
    // Cramer's rule on the coordinates i, k of F = α e0 + β e1.
    let (alpha, beta): (Vec<K>, Vec<K>) = (0..=d)
        .map(|t| {
            let (fi, fk) = (forms[i].coeffs()[t].clone(), forms[k].coeffs()[t].clone());
            let a = (fi.clone() * e1[k].clone() - e1[i].clone() * fk.clone()) / det.clone();
            let b = (e0[i].clone() * fk - fi * e0[k].clone()) / det.clone();
            (a, b)
        })
        .unzip();
    let (alpha, beta) = (BinForm::from_coeffs(alpha), BinForm::from_coeffs(beta));
    let floor = 1e-12 * (alpha.norm() + beta.norm());
    if alpha.norm() <= floor || beta.norm() <= floor {
        return Err(Error::DegenerateRestriction);
    }
    let g = common_factor(&[alpha, beta])?;
    Ok(f.degree() - g.degree())
}

/// `pushforward_degree` at `samples` generic web points (at most 20).
pub fn check_pushforward<K: Field>(f: &EndoP2<K>, web: &WebSpec<K>, cfg: &CheckConfig) -> VerificationReport {
    let mut rng = cfg.rng("pushforward");
    let d = f.degree();
    let mut report = VerificationReport::new("pushforward", cfg, d, 0.0);
    let n = cfg.samples.min(20);
    let mut wrong = Vec::new();
    for k in 0..n {
        let comp = &web.components()[k % web.components().len()];
        match comp.sample(&mut rng).and_then(|c| pushforward_degree(f, &c)) {
            Ok(deg) if deg == d => {}
            Ok(deg) => wrong.push(format!("sample {k}: degree {deg}")),
            Err(e) => wrong.push(format!("sample {k}: {e}")),
        }
    }
    let detail = if wrong.is_empty() { None } else { Some(wrong.join("; ")) };
    report.verdict(format!("degree {d} on {n} generic web lines"), wrong.is_empty(), detail);
    report.samples = n;
    report
}
