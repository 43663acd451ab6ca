//! Splitting the ramification divisor into web lines and a sectional
//! part, and the identity relating the sectional part to the dual curve.

use rand::Rng;

use crate::curves::{dual_curve, ComponentParam, WebSpec};
use crate::families::Lift;
use crate::field::{Field, Regime, C64};
use crate::linalg::DenseMatrix;
use crate::polyalg::{
    binary_roots, linear_factor_multiplicity, monomials, resultant, BinForm, EndoP2, HomPoly3, P1Point, RatMapP1,
    DIVISIBILITY_TOL,
};
use crate::projgeom::ProjLine;
use crate::verify::report::{CheckConfig, VerificationReport};
use crate::{Error, Result};

/// `R_f = R_f^C + R_f^σ` relative to one web (or the union of all
/// component webs).
#[derive(Clone, Debug)]
pub struct ComponentSplit<K> {
    /// Web lines dividing `J` with their multiplicities.
    pub web_lines: Vec<(ProjLine<K>, u32)>,
    /// Conjugate web lines not defined over the field, as products.
    pub web_forms: Vec<WebForm<K>>,
    /// `J` with the web lines and forms removed.
    pub sectional: HomPoly3<K>,
    /// `[deg R_f^C, deg R_f^σ]`.
    pub degrees: [u32; 2],
}

/// Product of the web lines over the roots of a factor `G` of `R_φ` with
/// no roots in the field: `H(x) = Res_a(G, Σ ψ_i(a) x_i)`, of degree
/// `deg G`.
#[derive(Clone, Debug)]
pub struct WebForm<K> {
    pub form: HomPoly3<K>,
    /// The individual lines, numerically.
    pub lines: Vec<ProjLine<C64>>,
    pub multiplicity: u32,
}

#[derive(Clone, Debug)]
pub struct RamificationSplit<K> {
    pub jacobian: HomPoly3<K>,
    pub components: Vec<ComponentSplit<K>>,
    pub union: ComponentSplit<K>,
}

fn division_tol<K: Field>() -> f64 {
    match K::REGIME {
        Regime::Exact => 0.0,
        Regime::Float => DIVISIBILITY_TOL,
    }
}

fn peel<K: Field>(j: &HomPoly3<K>, lines: &[(ProjLine<K>, u32)], forms: &[WebForm<K>]) -> Result<HomPoly3<K>> {
    let mut rest = j.clone();
    for w in forms {
        rest = rest
            .divide_exact(&w.form.pow(w.multiplicity), division_tol::<K>())?
            .ok_or_else(|| Error::SplitMismatch("conjugate web lines do not divide the Jacobian".into()))?;
    }
    for (l, m) in lines {
        let lin = HomPoly3::linear(l.coords()).pow(*m);
        rest = rest
            .divide_exact(&lin, division_tol::<K>())?
            .ok_or_else(|| Error::SplitMismatch(format!("line {:?} does not divide the Jacobian", l.unit_c64())))?;
    }
    Ok(rest)
}

fn split_from_lines<K: Field>(
    j: &HomPoly3<K>,
    web_lines: Vec<(ProjLine<K>, u32)>,
    web_forms: Vec<WebForm<K>>,
) -> Result<ComponentSplit<K>> {
    let sectional = peel(j, &web_lines, &web_forms)?;
    let deg_c = web_lines.iter().map(|(_, m)| m).sum::<u32>()
        + web_forms.iter().map(|w| w.form.degree() * w.multiplicity).sum::<u32>();
    Ok(ComponentSplit { degrees: [deg_c, sectional.degree()], web_lines, web_forms, sectional })
}

/// `H(x) = Res_a(G, Σ ψ_i(a) x_i)`, interpolated on the principal lattice
/// `{(i, j, 1) : i + j ≤ deg G}`, which is unisolvent for forms of that
/// degree.
fn conjugate_lines_form<K: Field>(psi: &crate::curves::RationalParam<K>, g: &BinForm<K>) -> Result<HomPoly3<K>> {
    let n = g.degree();
    let mons = monomials(n);
    let c = psi.components();
    let mut m = DenseMatrix::zeros(mons.len(), mons.len());
    let mut rhs = Vec::with_capacity(mons.len());
    let mut row = 0;
    for i in 0..=n {
        for j in 0..=n - i {
            let (x, y) = (K::from_i64(i as i64), K::from_i64(j as i64));
            for (col, e) in mons.iter().enumerate() {
                m.set(row, col, x.pow(e[0]) * y.pow(e[1]));
            }
            let l = c[0].scale(&x).add(&c[1].scale(&y))?.add(&c[2])?;
            rhs.push(resultant(g, &l));
            row += 1;
        }
    }
    let coeffs = m.solve(&rhs, division_tol::<K>())?;
    HomPoly3::from_terms(n, &mons.into_iter().zip(coeffs).collect::<Vec<_>>())
}

/// Factors of the Wronskian of `φ` with no roots in the field, rational
/// roots stripped, with their multiplicities.
fn irrational_crit_factors<K: Field>(phi: &RatMapP1<K>) -> Result<Vec<(BinForm<K>, u32)>> {
    let mut out = Vec::new();
    for (part, k) in phi.wronskian().square_free_parts() {
        let mut g = part;
        for r in binary_roots(&g)? {
            if let Some(e) = r.exact {
                g = g.divide_exact(&e.vanishing_form()).ok_or(Error::NotRepresentable)?;
            }
        }
        if g.degree() > 0 {
            out.push((g, k));
        }
    }
    Ok(out)
}

fn conjugate_web_forms<K: Field>(
    j: &HomPoly3<K>,
    psi: &crate::curves::RationalParam<K>,
    phi: &RatMapP1<K>,
) -> Result<Vec<WebForm<K>>> {
    let mut out = Vec::new();
    for (g, k) in irrational_crit_factors(phi)? {
        let form = conjugate_lines_form(psi, &g)?.monic();
        let mut rest = j.clone();
        let mut m = 0;
        while let Some(q) = rest.divide_exact(&form, division_tol::<K>())? {
            rest = q;
            m += 1;
        }
        if m != k {
            return Err(Error::SplitMismatch(format!(
                "conjugate web lines of degree {} have multiplicity {m} in J, expected {k} from the lift",
                form.degree()
            )));
        }
        let psic = psi.to_c64();
        let lines = binary_roots(&g.to_c64())?
            .iter()
            .map(|r| psic.eval(&r.point).map(|p| p.dualize()))
            .collect::<Result<_>>()?;
        out.push(WebForm { form, lines, multiplicity: m });
    }
    Ok(out)
}

/// Candidate web lines of one rational component: duals of `ψ(a)` for the
/// critical points `a` of `φ` and the parameters over singular points.
/// The multiplicity in `J` of the line over a smooth point must equal the
/// multiplicity of `a` in `R_φ`.
fn rational_component_lines<K: Field>(
    j: &HomPoly3<K>,
    web: &WebSpec<K>,
    psi: &crate::curves::RationalParam<K>,
    phi: &crate::polyalg::RatMapP1<K>,
) -> Result<Vec<(ProjLine<K>, u32)>> {
    let sing = web.curve().singular_points();
    let mut cands: Vec<(ProjLine<K>, Option<u32>)> = Vec::new();
    let mut add = |line: ProjLine<K>, expected: Option<u32>| {
        if let Some(entry) = cands.iter_mut().find(|(l, _)| l.same(&line, 1e-9)) {
            entry.1 = match (entry.1, expected) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
        } else {
            cands.push((line, expected));
        }
    };
    for r in phi.crit_divisor()?.points {
        let a = match (&r.exact, K::REGIME) {
            (Some(e), _) => e.clone(),
            (None, Regime::Float) => {
                let [a0, a1] = *r.point.coords();
                P1Point::new(K::from_c64(a0).unwrap(), K::from_c64(a1).unwrap())?
            }
            // Handled as conjugate forms.
            (None, Regime::Exact) => continue,
        };
        let c = psi.eval(&a)?;
        let singular = psi.special_parameters().iter().any(|s| s.same(&a, 1e-9))
            || sing.iter().any(|s| s.same(&c, 1e-9));
        add(c.dualize(), (!singular).then_some(r.multiplicity));
    }
    for a in psi.special_parameters() {
        add(psi.eval(a)?.dualize(), None);
    }
    let mut out = Vec::new();
    for (line, expected) in cands {
        let (m, _) = linear_factor_multiplicity(j, &line, division_tol::<K>())?;
        if let Some(e) = expected {
            if e != m {
                return Err(Error::SplitMismatch(format!(
                    "web line {:?} has multiplicity {m} in J, expected {e} from the lift",
                    line.unit_c64()
                )));
            }
        }
        if m > 0 {
            out.push((line, m));
        }
    }
    Ok(out)
}

/// Splits `R_f` per web component using the lifts, and over the union of
/// the component webs.
pub fn ramification_split<K: Field>(f: &EndoP2<K>, web: &WebSpec<K>, lifts: &[Lift<K>]) -> Result<RamificationSplit<K>> {
    if lifts.len() != web.components().len() {
        return Err(Error::InvalidArgument(format!(
            "{} lifts for {} web components",
            lifts.len(),
            web.components().len()
        )));
    }
    let j = f.jacobian_determinant();
    let mut components = Vec::new();
    let mut all: Vec<(ProjLine<K>, u32)> = Vec::new();
    let mut all_forms: Vec<WebForm<K>> = Vec::new();
    for (comp, lift) in web.components().iter().zip(lifts) {
        let (lines, forms) = match (&comp.param, lift) {
            (ComponentParam::Rational(psi), Lift::Rational(phi)) => {
                (rational_component_lines(&j, web, psi, phi)?, conjugate_web_forms(&j, psi, phi)?)
            }
            // Translations of the torus are unramified.
            (ComponentParam::Elliptic(_), Lift::Elliptic(_)) => (Vec::new(), Vec::new()),
            _ => return Err(Error::InvalidArgument("lift does not match the component".into())),
        };
        for (l, m) in &lines {
            if !all.iter().any(|(x, _)| x.same(l, 1e-9)) {
                all.push((l.clone(), *m));
            }
        }
        for w in &forms {
            if !all_forms.iter().any(|x| x.form.proportional(&w.form, division_tol::<K>())) {
                all_forms.push(w.clone());
            }
        }
        components.push(split_from_lines(&j, lines, forms)?);
    }
    let union = split_from_lines(&j, all, all_forms)?;
    Ok(RamificationSplit { jacobian: j, components, union })
}

/// Degree table check: each component split against the expected one and
/// `deg R_f = 3(d − 1)`.
pub fn check_ramification<K: Field>(
    f: &EndoP2<K>,
    web: &WebSpec<K>,
    lifts: &[Lift<K>],
    expected: Option<&[[u32; 2]]>,
    cfg: &CheckConfig,
) -> (VerificationReport, Option<RamificationSplit<K>>) {
    let d = f.degree();
    let mut report = VerificationReport::new("ramification", cfg, d, 0.0);
    let split = match ramification_split(f, web, lifts) {
        Ok(s) => s,
        Err(e) => {
            report.failure("split", e.to_string());
            return (report, None);
        }
    };
    report.verdict(
        "deg R_f = 3(d-1)",
        split.jacobian.degree() == 3 * (d - 1),
        Some(format!("deg J = {}", split.jacobian.degree())),
    );
    for (i, c) in split.components.iter().enumerate() {
        let got = c.degrees;
        let (pass, want) = match expected.and_then(|e| e.get(i)) {
            Some(w) => (got == *w, format!(", expected {w:?}")),
            None => (true, String::new()),
        };
        let mut lines: Vec<String> = c.web_lines.iter().map(|(l, m)| format!("{m}·{}", line_text(l))).collect();
        lines.extend(c.web_forms.iter().map(|w| format!("{}·({} conjugate lines)", w.multiplicity, w.lines.len())));
        report.verdict(
            format!("component {i}: (deg R^C, deg R^σ)"),
            pass && got[0] + got[1] == 3 * (d - 1),
            Some(format!("{got:?}{want}; web lines [{}]", lines.join(", "))),
        );
    }
    if web.components().len() > 1 {
        report.verdict("union (informational)", true, Some(format!("{:?}", split.union.degrees)));
    }
    report.samples = 1;
    (report, Some(split))
}

fn line_text<K: Field>(l: &ProjLine<K>) -> String {
    let c = l.coords();
    format!("[{}:{}:{}]", c[0].to_text(), c[1].to_text(), c[2].to_text())
}

/// Equation of the dual curve of the web's single curved component, or
/// `None` when the web has no curved component or more than one.
pub fn web_dual_curve<K: Field, R: Rng + ?Sized>(web: &WebSpec<K>, rng: &mut R) -> Result<Option<HomPoly3<K>>> {
    let curved: Vec<_> = web.components().iter().filter(|c| c.curve.degree() >= 2).collect();
    if curved.len() != 1 {
        return Ok(None);
    }
    match &curved[0].param {
        ComponentParam::Rational(psi) => Ok(Some(dual_curve(psi, rng)?.0.equation().clone())),
        ComponentParam::Elliptic(l) => {
            let (eq, _) = l.dual_curve(50, rng)?;
            let coeffs: Option<Vec<K>> = eq.coeffs().iter().map(|c| K::from_c64(*c)).collect();
            let coeffs = coeffs.ok_or(Error::NotRepresentable)?;
            let mons = crate::polyalg::monomials(eq.degree());
            Ok(Some(HomPoly3::from_terms(eq.degree(), &mons.into_iter().zip(coeffs).collect::<Vec<_>>())?))
        }
    }
}

fn rel_norm<K: Field>(r: &HomPoly3<K>, scale: &HomPoly3<K>) -> f64 {
    match K::REGIME {
        Regime::Exact if r.is_zero() => 0.0,
        Regime::Exact => (r.norm() / scale.norm().max(f64::MIN_POSITIVE)).max(f64::MIN_POSITIVE),
        Regime::Float => r.norm() / scale.norm().max(f64::MIN_POSITIVE),
    }
}

/// `Č ∘ f = const · Č · S²` with `S` the sectional part of the union
/// split, and the equality `deg Č · (d − 1) = 2 deg R_f^σ`.
pub fn check_sectional_identity<K: Field>(
    f: &EndoP2<K>,
    web: &WebSpec<K>,
    split: &RamificationSplit<K>,
    cfg: &CheckConfig,
) -> VerificationReport {
    let mut rng = cfg.rng("sectional");
    let d = f.degree();
    // Floating divisions run through degree d·deg Č; they share the
    // root-level tolerance floor.
    let tol = match K::REGIME {
        Regime::Exact => 0.0,
        Regime::Float => cfg.tol.max(crate::verify::dynamics::ROOT_TOL),
    };
    let mut report = VerificationReport::new("sectional", cfg, d, tol);
    report.samples = 1;
    let dual = match web_dual_curve(web, &mut rng) {
        Ok(Some(c)) => c,
        Ok(None) => {
            report.verdict("applicability", true, Some("no single curved component; vacuous".into()));
            return report;
        }
        Err(e) => {
            report.failure("dual curve", e.to_string());
            return report;
        }
    };
    let s = &split.union.sectional;
    let deg_sigma = s.degree();
    report.verdict(
        "deg Č·(d-1) = 2·deg R^σ",
        dual.degree() * (d - 1) == 2 * deg_sigma,
        Some(format!("deg Č = {}, deg R^σ = {deg_sigma}", dual.degree())),
    );
    let pulled = match dual.compose(f.components()) {
        Ok(p) => p,
        Err(e) => {
            report.failure("pullback", e.to_string());
            return report;
        }
    };
    let steps = pulled.div_rem(&dual).and_then(|(q, r1)| {
        let r1 = rel_norm(&r1, &pulled);
        let (c, r2) = q.div_rem(&s.pow(2))?;
        Ok((r1, rel_norm(&r2, &q), c.degree()))
    });
    match steps {
        Ok((r1, r2, deg_c)) => {
            report.measure("Č divides Č∘f", r1, None);
            report.measure("S² divides (Č∘f)/Č", r2, None);
            report.verdict("quotient is constant", deg_c == 0, Some(format!("degree {deg_c}")));
        }
        Err(e) => report.failure("division", e.to_string()),
    }
    report
}

/// Converts a split to the floating regime.
pub fn split_to_c64<K: Field>(s: &RamificationSplit<K>) -> RamificationSplit<C64> {
    let conv = |c: &ComponentSplit<K>| ComponentSplit {
        web_lines: c.web_lines.iter().map(|(l, m)| (l.to_c64(), *m)).collect(),
        web_forms: c
            .web_forms
            .iter()
            .map(|w| WebForm { form: w.form.to_c64(), lines: w.lines.clone(), multiplicity: w.multiplicity })
            .collect(),
        sectional: c.sectional.to_c64(),
        degrees: c.degrees,
    };
    RamificationSplit {
        jacobian: s.jacobian.to_c64(),
        components: s.components.iter().map(conv).collect(),
        union: conv(&s.union),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_conic_line, make_nodal, make_pencil, make_three_lines, make_two_lines, make_ueda, Orientation};
    use crate::field::Q;
    use crate::polyalg::RatMapP1;

    fn poly(d: u32, t: &[([u32; 3], i64)]) -> HomPoly3<Q> {
        HomPoly3::from_int_terms(d, t).unwrap()
    }

    #[test]
    fn nodal_split_matches_jacobian_factorization() {
        let m = make_nodal::<Q>(2, Orientation::Plus).unwrap();
        let s = ramification_split(&m.map, &m.web, &m.lifts).unwrap();
        assert!(s.jacobian.proportional(&poly(3, &[([1, 1, 1], 1), ([0, 0, 3], -1)]), 0.0));
        assert_eq!(s.union.degrees, [1, 2]);
        assert_eq!(s.union.web_lines[0].0, ProjLine::from_ints([0, 0, 1]).unwrap());
        assert!(s.union.sectional.proportional(&poly(2, &[([1, 1, 0], 1), ([0, 0, 2], -1)]), 0.0));
    }

    #[test]
    fn irrational_critical_points_give_conjugate_forms() {
        // R_φ = 1 + 2t − t², roots 1 ± √2.
        let phi = RatMapP1::from_affine(&[Q::from_i64(0), Q::from_i64(1), Q::from_i64(1)], &[Q::from_i64(1), Q::from_i64(0), Q::from_i64(1)]).unwrap();
        let ueda = make_ueda(&phi).unwrap();
        let pencil = make_pencil(
            poly(2, &[([2, 0, 0], 1), ([0, 2, 0], 1)]),
            poly(2, &[([1, 1, 0], 1), ([0, 2, 0], 1)]),
            poly(2, &[([0, 0, 2], 1)]),
        )
        .unwrap();
        for m in [ueda, pencil] {
            let s = ramification_split(&m.map, &m.web, &m.lifts).unwrap();
            assert!(s.union.web_lines.is_empty());
            let w = &s.union.web_forms[0];
            assert_eq!((w.form.degree(), w.multiplicity, w.lines.len()), (2, 1, 2));
            // Oracle: each line ψ(a)^∨ over a root a of R_φ is a factor.
            let jc = s.jacobian.to_c64();
            for l in &w.lines {
                let (mult, _) = linear_factor_multiplicity(&jc, l, 1e-9).unwrap();
                assert_eq!(mult, 1);
            }
            assert_eq!(s.union.degrees, [2, 1]);
        }
    }

    #[test]
    fn ueda_split_and_sectional_identity() {
        let m = make_ueda(&RatMapP1::power(Q::from_i64(1), 2).unwrap()).unwrap();
        let s = ramification_split(&m.map, &m.web, &m.lifts).unwrap();
        assert_eq!(s.union.degrees, [2, 1]);
        assert!(s.union.sectional.proportional(&poly(1, &[([0, 1, 0], 1)]), 0.0));
        let r = check_sectional_identity(&m.map, &m.web, &s, &CheckConfig::new("conic"));
        assert!(r.pass, "{r:?}");
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn nodal_sectional_identity_exact() {
        for d in [2, 3] {
            let m = make_nodal::<Q>(d, Orientation::Plus).unwrap();
            let s = ramification_split(&m.map, &m.web, &m.lifts).unwrap();
            assert_eq!(s.union.degrees, [d - 1, 2 * (d - 1)]);
            let r = check_sectional_identity(&m.map, &m.web, &s, &CheckConfig::new("nodal"));
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn reducible_splits_per_component() {
        let t = make_three_lines::<Q>(3).unwrap();
        let s = ramification_split(&t.map, &t.web, &t.lifts).unwrap();
        assert!(s.components.iter().all(|c| c.degrees == [4, 2]));
        assert_eq!(s.union.degrees, [6, 0]);
        let p = [Q::from_i64(-1), Q::from_i64(0), Q::from_i64(1)];
        let q = [Q::from_i64(0), Q::from_i64(1), Q::from_i64(1)];
        let two = make_two_lines(&p, &q).unwrap();
        let s = ramification_split(&two.map, &two.web, &two.lifts).unwrap();
        assert!(s.components.iter().all(|c| c.degrees == [2, 1]));
        let cl = make_conic_line(Q::from_i64(2), 3, Orientation::Minus).unwrap();
        let s = ramification_split(&cl.map, &cl.web, &cl.lifts).unwrap();
        assert!(s.components.iter().all(|c| c.degrees == [4, 2]), "{:?}", s.components.iter().map(|c| c.degrees).collect::<Vec<_>>());
    }
}
