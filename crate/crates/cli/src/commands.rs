//! The five subcommands.

use std::path::Path;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use webendo::curves::{dual_curve, plucker_verify, ComponentParam, EulerData, WebSpec};
use webendo::elliptic::Lattice;
use webendo::families::{
    make_conic_line, make_nodal, make_pencil, make_smooth_cubic, make_three_lines, make_two_lines, make_ueda,
    pencil_lift, rational_web, FamilyDescriptor, FamilyMember, FamilyTag, Lift, Orientation,
};
use webendo::io::{read_json, write_json_atomic, ComponentRecord, CurveFile, MapFile};
use webendo::polyalg::{EndoP2, HomPoly3, RatMapP1};
use webendo::projgeom::ProjPoint;
use webendo::render::{render as render_web, RenderSpec, AFFINE_VIEW};
use webendo::verify::{run_checks, CheckConfig, CheckName, VerificationReport};
use webendo::{Error, Field, Regime, Result, C64, Q};

use crate::parse;
use crate::{ConstructArgs, DualArgs, Outcome, RenderArgs, ReportArgs, VerifyArgs};

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn parsed<T>(r: std::result::Result<T, String>) -> Result<T> {
    r.map_err(Error::Parse)
}

/// Rejects flags that do not apply to the chosen family.
fn only_flags(a: &ConstructArgs, allowed: &[&str]) -> Result<()> {
    let given = [
        ("phi", a.phi.is_some()),
        ("p", a.p.is_some()),
        ("q", a.q.is_some()),
        ("tau", a.tau.is_some()),
        ("mult", a.mult.is_some()),
        ("flex", a.flex.is_some()),
        ("orientation", a.orientation.is_some()),
    ];
    for (name, present) in given {
        if present && !allowed.contains(&name) {
            return Err(usage(format!("--{name} does not apply to family {}", a.family)));
        }
    }
    Ok(())
}

fn power_coeffs(d: u32) -> Vec<Q> {
    let mut v = vec![Q::zero(); d as usize + 1];
    v[d as usize] = Q::one();
    v
}

fn check_degree(found: u32, expected: u32, what: &str) -> Result<()> {
    if found != expected {
        return Err(Error::DegreeMismatch(format!("{what} has degree {found}, --degree is {expected}")));
    }
    Ok(())
}

/// `Σ c_i x^(d−i) y^i`.
fn binary_in_xy(c: &[Q], d: u32) -> HomPoly3<Q> {
    let terms: Vec<([u32; 3], Q)> = c.iter().enumerate().map(|(i, x)| ([d - i as u32, i as u32, 0], x.clone())).collect();
    HomPoly3::from_terms(d, &terms).expect("exponents of degree d")
}

fn lift_from_phi(a: &ConstructArgs) -> Result<RatMapP1<Q>> {
    match &a.phi {
        Some(s) => {
            let (n, d) = parsed(parse::affine_map(s))?;
            RatMapP1::from_affine(&n, &d)
        }
        None => RatMapP1::power(Q::one(), a.degree as i32),
    }
}

fn build(a: &ConstructArgs) -> Result<(MapFile, Vec<String>)> {
    let d = a.degree;
    if d < 2 {
        return Err(Error::InvalidDegree(format!("degree {d} < 2: invertible maps are excluded")));
    }
    let exact = |m: FamilyMember<Q>| (MapFile::new(&m.map, Some(m.descriptor.clone())), Vec::new());
    Ok(match a.family {
        FamilyTag::Pencil => {
            only_flags(a, &["phi"])?;
            let phi = lift_from_phi(a)?;
            check_degree(phi.degree(), d, "phi")?;
            let p = binary_in_xy(phi.denominator().coeffs(), d);
            let q = binary_in_xy(phi.numerator().coeffs(), d);
            exact(make_pencil(p, q, HomPoly3::monomial([0, 0, d], Q::one()))?)
        }
        FamilyTag::Conic => {
            only_flags(a, &["phi"])?;
            let phi = lift_from_phi(a)?;
            check_degree(phi.degree(), d, "phi")?;
            exact(make_ueda(&phi)?)
        }
        FamilyTag::Nodal => {
            only_flags(a, &["orientation"])?;
            exact(make_nodal(d, a.orientation.unwrap_or(Orientation::Plus))?)
        }
        FamilyTag::TwoLines => {
            only_flags(a, &["p", "q"])?;
            let p = match &a.p {
                Some(s) => parsed(parse::rational_list(s))?,
                None => power_coeffs(d),
            };
            let q = match &a.q {
                Some(s) => parsed(parse::rational_list(s))?,
                None => power_coeffs(d),
            };
            let m = make_two_lines(&p, &q)?;
            check_degree(m.degree(), d, "p")?;
            exact(m)
        }
        FamilyTag::ThreeLines => {
            only_flags(a, &[])?;
            exact(make_three_lines(d)?)
        }
        FamilyTag::ConicLine => {
            only_flags(a, &["phi", "orientation"])?;
            let c = match &a.phi {
                Some(s) => parsed(parse::rational(s))?,
                None => Q::one(),
            };
            exact(make_conic_line(c, d, a.orientation.unwrap_or(Orientation::Plus))?)
        }
        FamilyTag::SmoothCubic => {
            only_flags(a, &["tau", "mult", "flex"])?;
            let m = match a.mult {
                Some(m) => m,
                None => (d as f64).sqrt().round() as i64,
            };
            if (m * m) as u64 != d as u64 {
                return Err(Error::DegreeMismatch(format!("smooth-cubic degree is m² = {}, --degree is {d}", m * m)));
            }
            let [re, im] = a.tau.unwrap_or([0.0, 1.0]);
            let endo = make_smooth_cubic(Lattice::new(C64::new(re, im))?, m, a.flex.unwrap_or(0))?;
            let mut rng = CheckConfig::new("smooth-cubic").with_seed(a.seed).rng("construct");
            let (member, interp) = endo.member(&mut rng)?;
            let notes = vec![
                format!("seed: {}", a.seed),
                format!("interpolation residual: {:.3e}", interp.max_residual),
            ];
            (MapFile::new(&member.map, Some(member.descriptor)), notes)
        }
    })
}

fn describe_splits(desc: &FamilyDescriptor) -> String {
    let parts: Vec<String> = desc.expected_splits.iter().map(|[c, s]| format!("({c}, {s})")).collect();
    parts.join(" ")
}

pub fn construct(a: &ConstructArgs) -> Result<Outcome> {
    let (file, notes) = build(a)?;
    let desc = file.descriptor.as_ref().expect("constructed maps carry a descriptor");
    println!("family: {}", desc.family);
    println!("degree: {}", file.degree);
    println!("regime: {}", file.regime);
    println!("expected split (deg R_f^C, deg R_f^σ) per component: {}", describe_splits(desc));
    match file.regime {
        Regime::Exact => print_map(&file.to_endo::<Q>()?),
        Regime::Float => print_float_map(&file.to_endo::<C64>()?),
    }
    for n in notes {
        println!("{n}");
    }
    file.write(&a.out)?;
    println!("wrote {}", a.out.display());
    Ok(Outcome::Pass)
}

fn print_map<K: Field + std::fmt::Display>(m: &EndoP2<K>) {
    for (name, c) in ["f0", "f1", "f2"].iter().zip(m.components()) {
        println!("{name} = {c}");
    }
}

/// Terms below `1e-10` of the largest coefficient are omitted.
fn print_float_map(m: &EndoP2<C64>) {
    let big = m.components().iter().map(|c| c.norm()).fold(0.0, f64::max);
    for (name, c) in ["f0", "f1", "f2"].iter().zip(m.components()) {
        let terms: Vec<String> = c
            .terms()
            .filter(|(_, z)| z.norm() > 1e-10 * big)
            .map(|(e, z)| format!("({:.6e}{:+.6e}i)*x^{}*y^{}*z^{}", z.re, z.im, e[0], e[1], e[2]))
            .collect();
        println!("{name} ≈ {}", if terms.is_empty() { "0".into() } else { terms.join(" + ") });
    }
}

/// Where the web for `verify` comes from.
enum WebSource {
    Family(FamilyTag),
    File(CurveFile),
}

fn resolve_web_source(arg: &str, desc: Option<&FamilyDescriptor>) -> Result<WebSource> {
    if arg == "auto" {
        let d = desc.ok_or_else(|| usage("--web auto needs a map file with a family descriptor"))?;
        return Ok(WebSource::Family(d.family));
    }
    if let Ok(f) = arg.parse::<FamilyTag>() {
        return Ok(WebSource::Family(f));
    }
    Ok(WebSource::File(CurveFile::read(Path::new(arg))?))
}

fn family_web<K: Field>(f: FamilyTag, tau: Option<[f64; 2]>) -> Result<WebSpec<K>> {
    if f != FamilyTag::SmoothCubic {
        return rational_web(f);
    }
    let [re, im] = tau.unwrap_or([0.0, 1.0]);
    let web: Box<dyn std::any::Any> = Box::new(Lattice::new(C64::new(re, im))?.web());
    // the smooth-cubic web exists only over C64
    web.downcast::<WebSpec<K>>().map(|b| *b).map_err(|_| Error::NotRepresentable)
}

/// Lifts when the web is the one the descriptor describes; pencil lifts for
/// webs made of lines; otherwise none.
fn resolve_lifts<K: Field>(
    map: &EndoP2<K>,
    web: &WebSpec<K>,
    desc: Option<&FamilyDescriptor>,
    matches: bool,
) -> Option<Vec<Lift<K>>> {
    if let (Some(d), true) = (desc, matches) {
        return d.lifts(map, web).ok();
    }
    web.components()
        .iter()
        .map(|c| match (&c.param, c.curve.degree()) {
            (ComponentParam::Rational(_), 1) => {
                let apex = ProjPoint::from_array(c.curve.equation().coeffs_linear()).ok()?;
                pencil_lift(map, &apex).ok().map(Lift::Rational)
            }
            _ => None,
        })
        .collect()
}

fn run_verify<K: Field>(a: &VerifyArgs, file: &MapFile) -> Result<Vec<VerificationReport>> {
    let map = file.to_endo::<K>()?;
    let desc = file.descriptor.as_ref();
    let source = resolve_web_source(&a.web, desc)?;
    let (web, label, matches) = match &source {
        WebSource::Family(f) => {
            let tau = a.tau.or_else(|| desc.filter(|d| d.family == *f).and_then(|d| d.tau));
            (family_web::<K>(*f, tau)?, f.to_string(), desc.is_some_and(|d| d.family == *f))
        }
        WebSource::File(c) => (c.to_web::<K>()?, a.web.clone(), false),
    };
    let lifts = resolve_lifts(&map, &web, desc, matches);
    let checks: Vec<CheckName> = match &a.checks {
        Some(names) => names.iter().map(|n| n.trim().parse()).collect::<Result<_>>()?,
        None => CheckName::applicable(matches || lifts.is_some(), desc.filter(|_| matches).map(|d| d.family)),
    };
    let expected = if matches { desc.map(|d| d.expected_splits.as_slice()) } else { None };
    let cfg = CheckConfig::new(label)
        .with_seed(a.seed)
        .with_samples(a.samples)
        .with_tol(a.tol)
        .with_iterations(a.iterations);
    Ok(run_checks(&map, &web, lifts.as_deref(), expected, &cfg, &checks))
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    if a.samples == 0 {
        return Err(usage("--samples must be positive"));
    }
    let file = MapFile::read(&a.map)?;
    println!("seed: {}", a.seed);
    let reports = match file.regime {
        Regime::Exact => run_verify::<Q>(a, &file)?,
        Regime::Float => run_verify::<C64>(a, &file)?,
    };
    for r in &reports {
        println!("{}", r.summary());
    }
    write_json_atomic(&a.report, &reports)?;
    println!("wrote {}", a.report.display());
    let pass = reports.iter().all(|r| r.pass);
    println!("overall: {}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

pub fn dual(a: &DualArgs) -> Result<Outcome> {
    let mut rng = CheckConfig::new(a.family.name()).with_seed(a.seed).rng("dual");
    println!("seed: {}", a.seed);
    let (file, euler) = match a.family {
        FamilyTag::Conic | FamilyTag::Nodal => {
            let web = rational_web::<Q>(a.family)?;
            let comp = &web.components()[0];
            let ComponentParam::Rational(param) = &comp.param else { unreachable!("rational family") };
            let (curve, dual_param) = dual_curve(param, &mut rng)?;
            let euler = EulerData {
                deg_b: comp.curve.degree() as i64,
                deg_b_dual: curve.degree() as i64,
                deg_r_psi: param.ramification()?.degree() as i64,
                deg_r_psi_dual: dual_param.ramification()?.degree() as i64,
                chi: 2,
            };
            println!("dual curve: {}", curve.equation());
            (CurveFile::new::<Q>(vec![ComponentRecord::from_curve(&curve).with_param(&dual_param)]), euler)
        }
        FamilyTag::SmoothCubic => {
            let [re, im] = a.tau.unwrap_or([0.0, 1.0]);
            let lattice = Lattice::new(C64::new(re, im))?;
            let (eq, residual) = lattice.dual_curve(a.held_out, &mut rng)?;
            println!("fit residual at {} held-out parameters: {residual:.3e}", a.held_out);
            let curve = webendo::curves::DualCurve::new(eq, webendo::curves::CurveFamily::Other, Vec::new())?;
            let euler = EulerData {
                deg_b: 3,
                deg_b_dual: curve.degree() as i64,
                // the embedding is an immersion; cusps of the dual sit over the flexes
                deg_r_psi: 0,
                deg_r_psi_dual: lattice.flexes().len() as i64,
                chi: 0,
            };
            (CurveFile::from_curve(&curve).with_fit_residual(residual), euler)
        }
        f => return Err(usage(format!("dual of the {f} web is not a curve of degree ≥ 2"))),
    };
    println!("degree: {}", file.degree);
    let ok = plucker_verify(&euler);
    println!("plucker: {} ({})", euler.describe(), if ok { "holds" } else { "fails" });
    file.write(&a.out)?;
    println!("wrote {}", a.out.display());
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

pub fn render(a: &RenderArgs) -> Result<Outcome> {
    let mut spec = RenderSpec::new(a.family, a.lines);
    if a.affine {
        spec = spec.with_view(AFFINE_VIEW);
    }
    if let Some(v) = a.viewport {
        spec = spec.with_viewport(v);
    }
    if let Some(t) = a.tau {
        spec = spec.with_tau(t);
    }
    if let Some(s) = &a.stroke {
        spec.style.stroke = s.clone();
    }
    if let Some(w) = a.stroke_width {
        spec.style.stroke_width = w;
    }
    let r = render_web(&spec)?;
    println!("leaves drawn: {} of {} ({} miss the viewport)", r.leaves.len(), a.lines, r.skipped);
    r.write(&a.out)?;
    println!("wrote {}", a.out.display());
    Ok(Outcome::Pass)
}

/// A report file holds one report or a list of them.
#[derive(Deserialize)]
#[serde(untagged)]
enum ReportInput {
    Many(Vec<VerificationReport>),
    One(VerificationReport),
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MergedReport {
    pass: bool,
    total: usize,
    failed: usize,
    reports: Vec<VerificationReport>,
}

pub fn report(a: &ReportArgs) -> Result<Outcome> {
    let mut all = Vec::new();
    for f in &a.files {
        match read_json::<ReportInput>(f)? {
            ReportInput::Many(v) => all.extend(v),
            ReportInput::One(r) => all.push(r),
        }
    }
    println!("{:<18} {:<14} {:>3} {:>8} {:>12} {:>6}", "check", "family", "d", "samples", "maxResidual", "pass");
    for r in &all {
        println!(
            "{:<18} {:<14} {:>3} {:>8} {:>12.3e} {:>6}",
            r.check,
            r.family,
            r.d,
            r.samples,
            r.max_residual,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    let failed = all.iter().filter(|r| !r.pass).count();
    println!("{} reports, {} failed", all.len(), failed);
    let merged = MergedReport { pass: failed == 0, total: all.len(), failed, reports: all };
    if let Some(out) = &a.out {
        write_json_atomic(out, &merged)?;
        println!("wrote {}", out.display());
    }
    Ok(if merged.pass { Outcome::Pass } else { Outcome::Fail })
}
