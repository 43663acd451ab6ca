//! Acceptance criteria 1–12, one PASS/FAIL line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use webendo::curves::{dual_curve, plucker_verify, ComponentParam, EulerData};
use webendo::elliptic::{collinear_sum_check, EllipticEndo, Lattice};
use webendo::families::{
    make_conic_line, make_nodal, make_pencil, make_smooth_cubic, make_three_lines, make_two_lines, make_ueda,
    FamilyMember, FamilyTag, Orientation,
};
use webendo::polyalg::{elementary_symmetric, newton_power_sum, HomPoly3, P1Point, RatMapP1};
use webendo::render::{render, RenderSpec, CONIC_VIEW};
use webendo::verify::{
    check_crit_finite, check_invariance, check_pushforward, check_sectional_identity, pushforward_degree,
    ramification_split, totally_invariant_points, CheckConfig,
};
use webendo::{Field, ProjPoint, C64, Q};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn q(n: i64) -> Q {
    Q::from_i64(n)
}

fn poly(d: u32, t: &[([u32; 3], i64)]) -> HomPoly3<Q> {
    HomPoly3::from_int_terms(d, t).unwrap()
}

fn ueda(c: i64, d: u32) -> FamilyMember<Q> {
    let mut num = vec![q(0); d as usize + 1];
    num[0] = q(c);
    num[d as usize] = q(1);
    make_ueda(&RatMapP1::from_affine(&num, &[q(1)]).unwrap()).unwrap()
}

fn pencil(d: u32) -> FamilyMember<Q> {
    match d {
        2 => make_pencil(
            poly(2, &[([2, 0, 0], 1), ([0, 2, 0], 1)]),
            poly(2, &[([1, 1, 0], 1), ([0, 2, 0], 1)]),
            poly(2, &[([0, 0, 2], 1)]),
        ),
        _ => make_pencil(
            poly(3, &[([3, 0, 0], 1), ([0, 3, 0], 2)]),
            poly(3, &[([1, 2, 0], 1), ([0, 3, 0], 1)]),
            poly(3, &[([0, 0, 3], 1)]),
        ),
    }
    .unwrap()
}

type Labeled = (String, FamilyMember<Q>, Vec<[u32; 2]>);

/// Every exact family member at degrees 2 and 3 with its per-component
/// split `(deg R^C, deg R^σ)`.
fn members() -> Vec<Labeled> {
    let mut out = Vec::new();
    for d in [2u32, 3] {
        let k = d - 1;
        let sheet = [2 * k, k];
        let mut push = |name: String, m: FamilyMember<Q>, split: Vec<[u32; 2]>| out.push((format!("{name} d={d}"), m, split));
        push("pencil".into(), pencil(d), vec![sheet]);
        push("ueda t^d".into(), ueda(0, d), vec![sheet]);
        push("ueda t^d-2".into(), ueda(-2, d), vec![sheet]);
        for o in [Orientation::Plus, Orientation::Minus] {
            push(format!("nodal {o:?}"), make_nodal(d, o).unwrap(), vec![[k, 2 * k]]);
        }
        let p: Vec<Q> = (0..=d as i64).map(|i| q(i - 1)).collect();
        let qq: Vec<Q> = (0..=d as i64).map(|i| q(if i == d as i64 { 1 } else { i })).collect();
        push("two-lines".into(), make_two_lines(&p, &qq).unwrap(), vec![sheet; 2]);
        push("three-lines".into(), make_three_lines(d).unwrap(), vec![sheet; 3]);
        push("conic-line".into(), make_conic_line(q(3), d, Orientation::Plus).unwrap(), vec![sheet; 2]);
    }
    out
}

fn smooth_cubic(rng: &mut ChaCha8Rng) -> FamilyMember<C64> {
    let f = make_smooth_cubic(Lattice::square(), 2, 0).unwrap();
    f.member(rng).unwrap().0
}

fn c1() -> Outcome {
    let m = make_nodal::<Q>(2, Orientation::Plus).map_err(|e| e.to_string())?;
    let expected = [
        poly(2, &[([2, 0, 0], 1), ([0, 1, 1], -2)]),
        poly(2, &[([0, 2, 0], 1), ([1, 0, 1], -2)]),
        poly(2, &[([0, 0, 2], 1)]),
    ];
    ensure(m.map.components() == &expected, format!("got {:?}", m.map.components()))?;
    Ok("f_2 = (x²−2y, y²−2x) coefficient for coefficient".into())
}

fn c2() -> Outcome {
    let start = Instant::now();
    let e = elementary_symmetric::<Q>();
    for d in 1..=10u32 {
        let lhs = newton_power_sum(d).substitute(&e, d);
        let rhs = poly(d, &[([d, 0, 0], 1), ([0, d, 0], 1), ([0, 0, d], 1)]);
        ensure(lhs.sub(&rhs).map_err(|e| e.to_string())?.is_zero(), format!("d = {d}: nonzero difference"))?;
    }
    let t = start.elapsed().as_secs_f64();
    ensure(t < 1.0, format!("took {t:.3} s"))?;
    Ok(format!("d = 1..10 exact in {:.1} ms", t * 1e3))
}

fn c3() -> Outcome {
    let all = members();
    for (name, m, want) in &all {
        let d = m.map.degree();
        let s = ramification_split(&m.map, &m.web, &m.lifts).map_err(|e| format!("{name}: {e}"))?;
        ensure(s.jacobian.degree() == 3 * (d - 1), format!("{name}: deg J = {}", s.jacobian.degree()))?;
        let got: Vec<[u32; 2]> = s.components.iter().map(|c| c.degrees).collect();
        ensure(&got == want, format!("{name}: split {got:?}, expected {want:?}"))?;
    }
    Ok(format!("{} members, exact degrees", all.len()))
}

fn c4() -> Outcome {
    let cfg = CheckConfig::new("acceptance");
    for (name, m) in [("ueda t²", ueda(0, 2)), ("nodal f_2", make_nodal(2, Orientation::Plus).unwrap())] {
        let s = ramification_split(&m.map, &m.web, &m.lifts).map_err(|e| e.to_string())?;
        let r = check_sectional_identity(&m.map, &m.web, &s, &cfg);
        ensure(r.pass && r.max_residual == 0.0, format!("{name}: {}", r.summary()))?;
    }
    Ok("Č∘f = c·Č·S² with zero remainder".into())
}

fn c5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut degs = Vec::new();
    for tag in [FamilyTag::Conic, FamilyTag::Nodal] {
        let web = webendo::families::rational_web::<Q>(tag).map_err(|e| e.to_string())?;
        let ComponentParam::Rational(psi) = &web.components()[0].param else { return Err("not rational".into()) };
        degs.push(dual_curve(psi, &mut rng).map_err(|e| e.to_string())?.0.degree());
    }
    let (eq, fit) = Lattice::square().dual_curve(50, &mut rng).map_err(|e| e.to_string())?;
    degs.push(eq.degree());
    ensure(degs == [2, 4, 6], format!("degrees {degs:?}"))?;
    ensure(fit < 1e-6, format!("fit residual {fit:e}"))?;
    Ok(format!("deg Č = 2, 4, 6; smooth-cubic fit residual {fit:.1e}"))
}

fn c6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let web = webendo::families::rational_web::<Q>(FamilyTag::Nodal).map_err(|e| e.to_string())?;
    let ComponentParam::Rational(psi) = &web.components()[0].param else { return Err("not rational".into()) };
    let (dual, dual_psi) = dual_curve(psi, &mut rng).map_err(|e| e.to_string())?;
    let deg_r = |p: &webendo::curves::RationalParam<Q>| -> Result<i64, String> {
        let r = p.ramification().map_err(|e| e.to_string())?;
        Ok(r.points.iter().map(|x| x.multiplicity as i64).sum())
    };
    let nodal = EulerData {
        deg_b: 3,
        deg_b_dual: dual.degree() as i64,
        deg_r_psi: deg_r(psi)?,
        deg_r_psi_dual: deg_r(&dual_psi)?,
        chi: 2,
    };
    let l = Lattice::square();
    let (eq, _) = l.dual_curve(50, &mut rng).map_err(|e| e.to_string())?;
    let smooth = EulerData { deg_b: 3, deg_b_dual: eq.degree() as i64, deg_r_psi: 0, deg_r_psi_dual: l.flexes().len() as i64, chi: 0 };
    let as_tuple = |e: &EulerData| (e.deg_b, e.deg_b_dual, e.deg_r_psi, e.deg_r_psi_dual, e.chi);
    ensure(as_tuple(&nodal) == (3, 4, 0, 3, 2), format!("nodal {:?}", as_tuple(&nodal)))?;
    ensure(as_tuple(&smooth) == (3, 6, 0, 9, 0), format!("smooth {:?}", as_tuple(&smooth)))?;
    for e in [&nodal, &smooth] {
        ensure(plucker_verify(e) && e.sides() == (e.chi, e.chi), e.describe())?;
    }
    Ok(format!("{}; {}", nodal.describe(), smooth.describe()))
}

fn c7() -> Outcome {
    let cfg = CheckConfig::new("acceptance").with_seed(7).with_samples(1000);
    let mut worst = 0.0f64;
    for (name, m, _) in members() {
        let r = check_invariance(&m.map, &m.web, &cfg);
        ensure(r.pass && r.max_residual < 1e-8, format!("{name}: {}", r.summary()))?;
        worst = worst.max(r.max_residual);
    }
    let sc = smooth_cubic(&mut ChaCha8Rng::seed_from_u64(7));
    let r = check_invariance(&sc.map, &sc.web, &cfg);
    ensure(r.pass && r.max_residual < 1e-8, format!("smooth cubic: {}", r.summary()))?;
    worst = worst.max(r.max_residual);
    let f2 = make_nodal::<Q>(2, Orientation::Plus).unwrap();
    let conic = webendo::families::rational_web::<Q>(FamilyTag::Conic).unwrap();
    ensure(!check_invariance(&f2.map, &conic, &cfg).pass, "f_2 preserves the conic web")?;
    Ok(format!("max residual {worst:.1e}; negative control fails"))
}

fn c8() -> Outcome {
    let cfg = CheckConfig::new("acceptance").with_seed(8).with_samples(20);
    let mut count = 0;
    for (name, m, _) in members() {
        let r = check_pushforward(&m.map, &m.web, &cfg);
        ensure(r.pass && r.samples == 20, format!("{name}: {}", r.summary()))?;
        count += 1;
    }
    // Independent draw on the smooth cubic: tangent duals at random points.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let sc = smooth_cubic(&mut rng);
    let l = Lattice::square();
    for _ in 0..20 {
        let c = l.embed(&l.random_point(&mut rng));
        let deg = pushforward_degree(&sc.map, &c).map_err(|e| e.to_string())?;
        ensure(deg == 4, format!("smooth cubic: degree {deg}"))?;
    }
    Ok(format!("{} members and the smooth cubic at 20 web points", count))
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = make_smooth_cubic(Lattice::square(), 2, 0).map_err(|e| e.to_string())?;
    let mut spread = 0.0f64;
    let mut done = 0;
    while done < 100 {
        let p = ProjPoint::new(C64::sample(&mut rng), C64::sample(&mut rng), C64::sample(&mut rng)).unwrap();
        match f.evaluate(&p) {
            Ok(img) => {
                spread = spread.max(img.spread);
                done += 1;
            }
            Err(webendo::Error::NearCriticalPoint { .. }) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    ensure(spread < 1e-6, format!("spread {spread:e}"))?;
    let fit = f.to_polynomial(3 * 15 + 30, &mut rng).map_err(|e| e.to_string())?;
    ensure(fit.map.degree() == 4 && fit.max_residual < 1e-6, format!("fit residual {:e}", fit.max_residual))?;

    // Collinear triples z1 + z2 + z3 = 0 before and after z ↦ 2z + t.
    let l = Lattice::square();
    let mut broken_by = |g: &EllipticEndo| -> (usize, usize) {
        let (mut broken, mut total) = (0, 0);
        while total < 1000 {
            let z1 = l.random_point(&mut rng);
            let z2 = l.random_point(&mut rng);
            let z3 = l.neg(&l.add(&z1, &z2));
            let images = [g.apply(&z1), g.apply(&z2), g.apply(&z3)];
            let (Ok(before), Ok(after)) =
                (collinear_sum_check(&l, [&z1, &z2, &z3]), collinear_sum_check(&l, [&images[0], &images[1], &images[2]]))
            else {
                continue;
            };
            if before.determinant > 1e-6 {
                continue;
            }
            total += 1;
            if after.determinant > 1e-6 {
                broken += 1;
            }
        }
        (broken, total)
    };
    let flex = EllipticEndo::new(l.clone(), 2, l.from_coordinates(1.0 / 3.0, 0.0)).map_err(|e| e.to_string())?;
    let (flex_broken, _) = broken_by(&flex);
    ensure(flex_broken == 0, format!("flex translation breaks {flex_broken} triples"))?;
    let g = EllipticEndo::with_translation(l.clone(), 2, l.from_coordinates(0.1, 0.23)).unwrap();
    let (broken, total) = broken_by(&g);
    ensure(broken * 2 > total, format!("only {broken}/{total} triples broken"))?;
    Ok(format!("spread {spread:.1e}; fit residual {:.1e}; non-flex control breaks {broken}/{total}", fit.max_residual))
}

fn c10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut maps = 0;
    let mut counts = [0usize; 3];
    while maps < 100 {
        let d = rng.random_range(2..=5usize);
        let coeffs = |rng: &mut ChaCha8Rng| (0..=d).map(|_| q(rng.random_range(-5..=5))).collect::<Vec<_>>();
        let (mut num, mut den) = (coeffs(&mut rng), coeffs(&mut rng));
        num[d] = q(rng.random_range(1..=5));
        den[d] = q(rng.random_range(-5..=5));
        // Half are polynomials, for which ∞ is totally invariant.
        if rng.random_bool(0.5) {
            den = vec![q(rng.random_range(1..=5))];
        }
        let Ok(phi) = RatMapP1::from_affine(&num, &den) else { continue };
        let pts = totally_invariant_points(&phi).map_err(|e| e.to_string())?;
        ensure(pts.len() <= 2, format!("{} totally invariant points", pts.len()))?;
        counts[pts.len()] += 1;
        maps += 1;
    }
    for d in 2..=5 {
        let phi = RatMapP1::power(q(1), d).unwrap();
        let pts = totally_invariant_points(&phi).map_err(|e| e.to_string())?;
        let exact: Vec<P1Point<Q>> = pts.into_iter().filter_map(|r| r.exact).collect();
        let has = |p: &P1Point<Q>| exact.iter().any(|x| x == p);
        ensure(
            exact.len() == 2 && has(&P1Point::affine(q(0))) && has(&P1Point::infinity()),
            format!("t^{d}: {exact:?}"),
        )?;
    }
    Ok(format!("100 random maps with 0/1/2 points: {counts:?}; t^d gives {{0, ∞}}"))
}

fn c11() -> Outcome {
    let cfg = CheckConfig::new("acceptance").with_seed(11).with_iterations(10);
    let mut notes = Vec::new();
    for d in [2, 3] {
        let m = make_nodal::<Q>(d, Orientation::Plus).unwrap();
        let s = ramification_split(&m.map, &m.web, &m.lifts).map_err(|e| e.to_string())?;
        let r = check_crit_finite(&m.map, &m.web, &s, &cfg);
        ensure(r.pass && r.max_residual < 1e-5, format!("f_{d}: {}", r.summary()))?;
        notes.push(format!("f_{d} {:.0e}", r.max_residual));
    }
    let sc = smooth_cubic(&mut ChaCha8Rng::seed_from_u64(11));
    let s = ramification_split(&sc.map, &sc.web, &sc.lifts).map_err(|e| e.to_string())?;
    let r = check_crit_finite(&sc.map, &sc.web, &s, &cfg.clone().with_samples(50));
    ensure(r.pass && r.max_residual < 1e-5, format!("smooth cubic: {}", r.summary()))?;
    notes.push(format!("smooth cubic {:.1e}", r.max_residual));
    Ok(notes.join(", "))
}

/// `y² − 4xz` restricted to the segment's line, as a quadratic; its
/// normalized discriminant vanishes exactly when the line is tangent.
fn tangency(seg: [f64; 4]) -> f64 {
    let inv = Matrix3::from_row_slice(&CONIC_VIEW.concat()).try_inverse().unwrap();
    let p = inv * Vector3::new(seg[0], seg[1], 1.0);
    let r = inv * Vector3::new(seg[2], seg[3], 1.0);
    let g = |s: f64| {
        let v = p * (1.0 - s) + r * s;
        v[1] * v[1] - 4.0 * v[0] * v[2]
    };
    // g(s) = a s² + b s + c from three samples.
    let (g0, g1, g2) = (g(0.0), g(1.0), g(-1.0));
    let (a, b, c) = ((g1 + g2) / 2.0 - g0, (g1 - g2) / 2.0, g0);
    (b * b - 4.0 * a * c).abs() / (a.abs() + b.abs() + c.abs()).powi(2)
}

fn c12() -> Outcome {
    let r = render(&RenderSpec::new(FamilyTag::Conic, 60)).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    let mut count = 0;
    for line in r.svg.lines().filter(|l| l.trim_start().starts_with("<line ")) {
        let attr = |k: &str| -> Result<f64, String> {
            let key = format!(" {k}=\"");
            let start = line.find(&key).ok_or("missing attribute")? + key.len();
            let end = start + line[start..].find('"').ok_or("unterminated attribute")?;
            line[start..end].parse().map_err(|_| "bad number".to_string())
        };
        worst = worst.max(tangency([attr("x1")?, attr("y1")?, attr("x2")?, attr("y2")?]));
        count += 1;
    }
    ensure(count == 60, format!("{count} lines drawn"))?;
    ensure(worst < 1e-6, format!("double-root residual {worst:e}"))?;
    Ok(format!("60 leaves, double-root residual {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("nodal example f_2 reproduced exactly", c1),
        ("Newton identity d = 1..10", c2),
        ("ramification split table", c3),
        ("sectional critical set identity", c4),
        ("dual curve degrees", c5),
        ("Plücker formula", c6),
        ("invariance suite", c7),
        ("pushforward degree", c8),
        ("smooth cubic pointwise consistency", c9),
        ("totally invariant sets", c10),
        ("critical finiteness", c11),
        ("rendered conic leaves tangent to the envelope", c12),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!("{} of 12 criteria pass in {:.1} s", 12 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
