//! Forward orbits of the critical locus, totally invariant points of the
//! lift, and total invariance of the singular locus of the web curve.

use rand::Rng;

use crate::curves::{common_factor, multiplicity_at, ComponentParam, RationalParam, WebSpec};
use crate::families::Lift;
use crate::field::{Field, Regime, C64};
use crate::polyalg::{binary_roots, point_on_span, restrict_to_line, BinForm, EndoP2, HomPoly3, P1Point, PlaneMap, RatMapP1, Root};
use crate::projgeom::{ProjLine, ProjPoint};
use crate::verify::invariance::induced_map_on_c;
use crate::verify::ramification::{web_dual_curve, RamificationSplit};
use crate::verify::report::{CheckConfig, VerificationReport};
use crate::{Error, Result};

/// Floor on the tolerance of root-based residuals.
pub const ROOT_TOL: f64 = 1e-5;
/// Distance below which two floating points of the dual plane coincide.
const SAME_POINT: f64 = 1e-6;

fn same_point<K: Field>(a: &ProjPoint<K>, b: &ProjPoint<K>) -> bool {
    match K::REGIME {
        Regime::Exact => a.same(b, 0.0),
        Regime::Float => a.distance(b) <= SAME_POINT,
    }
}

fn point_text<K: Field>(p: &ProjPoint<K>) -> String {
    match K::REGIME {
        Regime::Exact => {
            let c = p.coords();
            format!("[{}:{}:{}]", c[0].to_text(), c[1].to_text(), c[2].to_text())
        }
        Regime::Float => {
            let u = p.unit_c64();
            let f = |z: C64| format!("{:.4}{:+.4}i", z.re, z.im);
            format!("[{}:{}:{}]", f(u[0]), f(u[1]), f(u[2]))
        }
    }
}

/// Points on `{S = 0}` from its intersections with random lines.
fn sample_curve_points<R: Rng + ?Sized>(s: &HomPoly3<C64>, lines: usize, rng: &mut R) -> Vec<ProjPoint<C64>> {
    let mut out = Vec::new();
    for _ in 0..lines {
        let Ok(l) = ProjLine::from_array([C64::sample(rng), C64::sample(rng), C64::sample(rng)]) else { continue };
        let (form, basis) = restrict_to_line(s, &l);
        let Ok(roots) = binary_roots(&form) else { continue };
        out.extend(roots.iter().filter_map(|r| point_on_span(&basis, &r.point).ok()));
    }
    out
}

/// Random points of the dual curve: tangent duals at random parameters.
fn sample_dual_points<K: Field, R: Rng + ?Sized>(web: &WebSpec<K>, n: usize, rng: &mut R) -> Vec<ProjPoint<C64>> {
    let mut out = Vec::new();
    for comp in web.components().iter().filter(|c| c.curve.degree() >= 2) {
        for _ in 0..n {
            let p = match &comp.param {
                ComponentParam::Rational(psi) => {
                    crate::curves::tangent_dual(&psi.to_c64(), &P1Point::affine(C64::sample(rng))).ok()
                }
                ComponentParam::Elliptic(l) => Some(l.tangent_dual(&l.random_point(rng))),
            };
            out.extend(p);
        }
    }
    out
}

/// Exact regime: `f(|S|) ⊆ Č` and `f(Č) ⊆ Č` as divisibility of `Č ∘ f`
/// by the reduced sectional part and by the irreducible `Č`.
fn exact_image_cases<K: Field>(report: &mut VerificationReport, f: &EndoP2<K>, dual: &HomPoly3<K>, sect: &HomPoly3<K>) {
    let composed = match dual.compose(f.components()) {
        Ok(c) => c,
        Err(e) => return report.failure("Č ∘ f", e.to_string()),
    };
    let scale = composed.norm().max(f64::MIN_POSITIVE);
    for (name, divisor) in [("f(|R^σ|) ⊆ Č", sect), ("f(Č) ⊆ Č", dual)] {
        if divisor.degree() == 0 {
            continue;
        }
        match composed.div_rem(divisor) {
            Ok((_, rem)) => report.measure(name, rem.norm() / scale, Some("remainder of Č ∘ f".into())),
            Err(e) => report.failure(name, e.to_string()),
        }
    }
}

/// Floating regime: residuals of `Č` at images of sampled points.
fn sampled_image_cases<K: Field, R: Rng + ?Sized>(
    report: &mut VerificationReport,
    f: &EndoP2<K>,
    web: &WebSpec<K>,
    dual: &HomPoly3<K>,
    sect: &HomPoly3<K>,
    n: usize,
    rng: &mut R,
) {
    let (fc, dual, sect) = (f.to_c64(), dual.to_c64(), sect.to_c64());
    let image_residual = |pts: &[ProjPoint<C64>]| -> Result<f64> {
        let mut worst = 0.0f64;
        for p in pts {
            worst = worst.max(dual.relative_residual(&fc.apply(p)?));
        }
        Ok(worst)
    };
    if sect.degree() > 0 {
        let pts = sample_curve_points(&sect, n, rng);
        match image_residual(&pts) {
            Ok(r) => report.measure("f(|R^σ|) ⊆ Č", r, Some(format!("{} points", pts.len()))),
            Err(e) => report.failure("f(|R^σ|) ⊆ Č", e.to_string()),
        }
    }
    let pts = sample_dual_points(web, n, rng);
    match image_residual(&pts) {
        Ok(r) => report.measure("f(Č) ⊆ Č", r, Some(format!("{} points", pts.len()))),
        Err(e) => report.failure("f(Č) ⊆ Č", e.to_string()),
    }
}

/// Critical finiteness: `f(|R_f^σ|) ⊆ Č`, `f(Č) ⊆ Č`, and the web lines
/// of `R_f^C` have forward orbits that close within `cfg.iterations`.
pub fn check_crit_finite<K: Field>(
    f: &EndoP2<K>,
    web: &WebSpec<K>,
    split: &RamificationSplit<K>,
    cfg: &CheckConfig,
) -> VerificationReport {
    let mut rng = cfg.rng("crit-finite");
    let tol = match K::REGIME {
        Regime::Exact => 0.0,
        Regime::Float => cfg.tol.max(ROOT_TOL),
    };
    let mut report = VerificationReport::new("crit-finite", cfg, f.degree(), tol);
    let n = cfg.samples.clamp(1, 50);
    match web_dual_curve(web, &mut rng) {
        Ok(Some(dual)) => match K::REGIME {
            Regime::Exact => exact_image_cases(&mut report, f, &dual, &split.union.sectional),
            Regime::Float => sampled_image_cases(&mut report, f, web, &dual, &split.union.sectional, n, &mut rng),
        },
        Ok(None) => report.verdict("dual curve", true, Some("no single curved component; skipped".into())),
        Err(e) => report.failure("dual curve", e.to_string()),
    }
    // Orbit graph of the duals of the critical web lines under g.
    if split.union.web_forms.is_empty() {
        let starts = split.union.web_lines.iter().map(|(l, _)| l.dualize()).collect();
        orbit_graph(&mut report, f, web, starts, cfg.iterations, &mut rng);
    } else {
        let mut starts: Vec<ProjPoint<C64>> = split.union.web_lines.iter().map(|(l, _)| l.to_c64().dualize()).collect();
        starts.extend(split.union.web_forms.iter().flat_map(|w| w.lines.iter().map(|l| l.dualize())));
        orbit_graph(&mut report, &f.to_c64(), &web.to_c64(), starts, cfg.iterations, &mut rng);
    }
    report.samples = match K::REGIME {
        Regime::Exact => 1,
        Regime::Float => n,
    };
    report
}

/// Forward orbits under the induced map on `Č` from `starts`; passes when
/// each orbit closes within `iterations` steps.
fn orbit_graph<K: Field, R: Rng + ?Sized>(
    report: &mut VerificationReport,
    f: &EndoP2<K>,
    web: &WebSpec<K>,
    starts: Vec<ProjPoint<K>>,
    iterations: usize,
    rng: &mut R,
) {
    let mut nodes: Vec<ProjPoint<K>> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let index = |nodes: &mut Vec<ProjPoint<K>>, p: &ProjPoint<K>| -> usize {
        match nodes.iter().position(|q| same_point(q, p)) {
            Some(i) => i,
            None => {
                nodes.push(p.clone());
                nodes.len() - 1
            }
        }
    };
    let mut open = Vec::new();
    for start in starts {
        let mut cur = index(&mut nodes, &start);
        let mut seen = vec![cur];
        let mut closed = false;
        for _ in 0..iterations {
            if edges.iter().any(|&(a, _)| a == cur) {
                closed = true;
                break;
            }
            let img = match induced_map_on_c(f, web, &nodes[cur].clone(), SAME_POINT, rng) {
                Ok(i) => i.point,
                Err(e) => {
                    report.failure(format!("orbit of {}", point_text(&start)), e.to_string());
                    break;
                }
            };
            let next = index(&mut nodes, &img);
            edges.push((cur, next));
            if seen.contains(&next) || edges.iter().any(|&(a, _)| a == next) {
                closed = true;
                break;
            }
            seen.push(next);
            cur = next;
        }
        if !closed {
            open.push(point_text(&start));
        }
    }
    let graph: Vec<String> = edges.iter().map(|(a, b)| format!("{} -> {}", point_text(&nodes[*a]), point_text(&nodes[*b]))).collect();
    report.verdict(
        format!("critical orbit graph closes within {} iterates", iterations),
        open.is_empty(),
        Some(if open.is_empty() {
            format!("{} nodes: {}", nodes.len(), graph.join("; "))
        } else {
            format!("open orbits from {}", open.join(", "))
        }),
    );
}

/// Fixed points of `φ` at which the local degree equals `deg φ`; at most
/// two for `deg φ ≥ 2`.
pub fn totally_invariant_points<K: Field>(phi: &RatMapP1<K>) -> Result<Vec<Root<K>>> {
    let d = phi.degree();
    let phic = phi.to_c64();
    let mut out = Vec::new();
    for r in phi.fixed_points()? {
        let local = match (&r.exact, K::REGIME) {
            (Some(e), Regime::Exact) => phi.local_degree(e)?,
            _ => phic.local_degree(&r.point)?,
        };
        if local == d {
            out.push(r);
        }
    }
    Ok(out)
}

/// Parameters `a` with `ψ(a) = s`.
fn parameters_over<K: Field>(psi: &RationalParam<K>, s: &ProjPoint<K>) -> Result<Vec<Root<K>>> {
    let c = psi.components();
    let sc = s.coords();
    let k = |i: usize| BinForm::constant(sc[i].clone());
    let cross = |i: usize, j: usize| c[i].mul(&k(j)).sub(&c[j].mul(&k(i)));
    let forms = [cross(1, 2)?, cross(2, 0)?, cross(0, 1)?];
    let g = common_factor(&forms)?;
    if g.degree() == 0 {
        return Ok(Vec::new());
    }
    binary_roots(&g)
}

/// `g(sing C) ⊆ sing C`, preimages of singular points through the lifts
/// lie over singular points, and `m_c(C) = δ − 1` for irreducible `C`.
pub fn check_sing_totinv<K: Field, M: PlaneMap<K> + ?Sized>(
    f: &M,
    web: &WebSpec<K>,
    lifts: &[Lift<K>],
    cfg: &CheckConfig,
) -> VerificationReport {
    let mut rng = cfg.rng("sing-totinv");
    let mut report = VerificationReport::new("sing-totinv", cfg, f.algebraic_degree(), 0.0);
    let sing = web.curve().singular_points().to_vec();
    report.samples = sing.len();
    if sing.is_empty() {
        report.verdict("singular locus", true, Some("C is smooth; vacuous".into()));
        return report;
    }
    let sing_c: Vec<ProjPoint<C64>> = sing.iter().map(|s| s.to_c64()).collect();
    let is_singular = |p: &ProjPoint<C64>| sing_c.iter().any(|s| s.distance(p) <= SAME_POINT);
    let delta = web.degree();
    for s in &sing {
        let name = point_text(s);
        match induced_map_on_c(f, web, s, SAME_POINT, &mut rng) {
            Ok(img) => report.verdict(
                format!("g({name}) singular"),
                sing.iter().any(|t| same_point(t, &img.point)),
                Some(format!("g = {}", point_text(&img.point))),
            ),
            Err(e) => report.failure(format!("g({name})"), e.to_string()),
        }
        for (i, (comp, lift)) in web.components().iter().zip(lifts).enumerate() {
            let (ComponentParam::Rational(psi), Lift::Rational(phi)) = (&comp.param, lift) else { continue };
            let outcome = (|| -> Result<(usize, bool)> {
                let mut count = 0;
                let mut ok = true;
                let psic = psi.to_c64();
                for a in parameters_over(psi, s)? {
                    let pre = match (&a.exact, K::REGIME) {
                        (Some(e), Regime::Exact) => {
                            phi.preimages(e)?.into_iter().map(|r| r.point).collect::<Vec<_>>()
                        }
                        _ => phi.to_c64().preimages(&a.point)?.into_iter().map(|r| r.point).collect(),
                    };
                    for b in pre {
                        count += 1;
                        ok &= is_singular(&psic.eval(&b)?);
                    }
                }
                Ok((count, ok))
            })();
            match outcome {
                Ok((0, _)) => {}
                Ok((count, ok)) => report.verdict(
                    format!("component {i}: preimages over {name} are singular"),
                    ok,
                    Some(format!("{count} preimage parameters")),
                ),
                Err(e) => report.failure(format!("component {i}: preimages over {name}"), e.to_string()),
            }
        }
        if web.is_irreducible() {
            let m = multiplicity_at(web.curve().equation(), s, 1e-9);
            report.verdict(
                format!("m_{name}(C) = δ-1"),
                m + 1 == delta,
                Some(format!("multiplicity {m}, δ = {delta}")),
            );
        }
    }
    report
}

/// Totally invariant points of every rational lift; fails if a lift has
/// more than two.
pub fn check_totally_invariant<K: Field>(lifts: &[Lift<K>], d: u32, cfg: &CheckConfig) -> VerificationReport {
    let mut report = VerificationReport::new("totally-invariant", cfg, d, 0.0);
    for (i, lift) in lifts.iter().enumerate() {
        let Lift::Rational(phi) = lift else {
            report.verdict(format!("component {i}"), true, Some("torus translation: no finite totally invariant set".into()));
            continue;
        };
        match totally_invariant_points(phi) {
            Ok(pts) => {
                let names: Vec<String> = pts
                    .iter()
                    .map(|r| match r.point.value() {
                        None => "∞".to_string(),
                        Some(v) if v.im.abs() < 1e-12 => format!("{}", v.re),
                        Some(v) => format!("{v}"),
                    })
                    .collect();
                report.verdict(format!("component {i}: at most two points"), pts.len() <= 2, Some(format!("{{{}}}", names.join(", "))));
            }
            Err(e) => report.failure(format!("component {i}"), e.to_string()),
        }
    }
    report.samples = lifts.len();
    report
}

/// Errors surfaced when no split could be formed.
pub fn no_split_report(check: &str, cfg: &CheckConfig, d: u32) -> VerificationReport {
    let mut r = VerificationReport::new(check, cfg, d, 0.0);
    r.failure("split", Error::SplitMismatch("no ramification split available".into()).to_string());
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_nodal, make_three_lines, make_two_lines, Orientation};
    use crate::field::Q;
    use crate::verify::ramification::ramification_split;

    #[test]
    fn power_map_totally_invariant_zero_and_infinity() {
        for d in 2..=5 {
            let phi = RatMapP1::power(Q::from_i64(1), d).unwrap();
            let pts = totally_invariant_points(&phi).unwrap();
            assert_eq!(pts.len(), 2);
            assert!(pts.iter().any(|r| r.point.is_infinity()));
            assert!(pts.iter().any(|r| r.point.value().map(|v| v.norm() == 0.0).unwrap_or(false)));
        }
    }

    #[test]
    fn shifted_square_only_infinity() {
        let phi = RatMapP1::polynomial(&[Q::from_i64(-1), Q::from_i64(0), Q::from_i64(1)]).unwrap();
        let pts = totally_invariant_points(&phi).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].point.is_infinity());
    }

    #[test]
    fn nodal_critical_orbits_close() {
        for d in [2, 3] {
            let m = make_nodal::<Q>(d, Orientation::Plus).unwrap();
            let s = ramification_split(&m.map, &m.web, &m.lifts).unwrap();
            let r = check_crit_finite(&m.map, &m.web, &s, &CheckConfig::new("nodal").with_samples(20));
            assert!(r.pass, "{r:#?}");
            let t = check_sing_totinv(&m.map, &m.web, &m.lifts, &CheckConfig::new("nodal"));
            assert!(t.pass, "{t:#?}");
        }
    }

    #[test]
    fn monomial_orbit_graph_has_three_fixed_nodes() {
        let m = make_three_lines::<Q>(2).unwrap();
        let s = ramification_split(&m.map, &m.web, &m.lifts).unwrap();
        let r = check_crit_finite(&m.map, &m.web, &s, &CheckConfig::new("three-lines"));
        assert!(r.pass, "{r:#?}");
        let graph = r.cases.last().unwrap().detail.clone().unwrap();
        assert!(graph.starts_with("3 nodes"), "{graph}");
        let p = [Q::from_i64(-1), Q::from_i64(0), Q::from_i64(1)];
        let two = make_two_lines(&p, &p).unwrap();
        let t = check_sing_totinv(&two.map, &two.web, &two.lifts, &CheckConfig::new("two-lines"));
        assert!(t.pass, "{t:#?}");
    }
}
