//! Python bindings: construct family members, apply and verify them, and
//! compute duals and renderings of their webs.

use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use num_complex::Complex64;
use webendo::curves::{dual_curve as rational_dual, plucker_verify, ComponentParam, EulerData};
use webendo::elliptic::Lattice;
use webendo::families::{
    make_conic_line, make_nodal, make_pencil, make_smooth_cubic, make_three_lines, make_two_lines, make_ueda,
    rational_web, FamilyMember, FamilyTag, Orientation,
};
use webendo::io::MapFile;
use webendo::polyalg::{newton_power_sum as newton, HomPoly3, PlaneMap, RatMapP1};
use webendo::render::{render, RenderSpec};
use webendo::verify::{run_checks, totally_invariant_points as tip, CheckConfig, CheckName};
use webendo::{Field, ProjPoint, Regime, C64, Q};

create_exception!(webendo_py, WebendoError, PyException);

fn err(e: webendo::Error) -> PyErr {
    WebendoError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = webendo::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

/// Accepts int, Fraction or str.
fn rational(x: &Bound<'_, PyAny>) -> PyResult<Q> {
    Q::parse_text(&x.str()?.to_cow()?).map_err(err)
}

fn rationals(xs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Q>> {
    xs.iter().map(rational).collect()
}

fn fraction<'py>(py: Python<'py>, q: &Q) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((q.to_text(),))
}

fn value<'py, K: Field>(py: Python<'py>, c: &K) -> PyResult<Bound<'py, PyAny>> {
    match K::REGIME {
        Regime::Exact => fraction(py, &Q::parse_text(&c.to_text()).map_err(err)?),
        Regime::Float => {
            let z = c.to_c64();
            Ok(Complex64::new(z.re, z.im).into_pyobject(py)?.into_any())
        }
    }
}

fn poly_terms<'py, K: Field>(py: Python<'py>, h: &HomPoly3<K>) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (e, c) in h.terms() {
        if !c.is_negligible(0.0) {
            d.set_item((e[0], e[1], e[2]), value(py, c)?)?;
        }
    }
    Ok(d)
}

fn json<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((text,))
}

enum Inner {
    Exact(FamilyMember<Q>),
    Float(FamilyMember<C64>),
}

/// A map of P² together with the web it preserves and its lifts.
#[pyclass(module = "webendo_py")]
pub struct Member {
    inner: Inner,
}

macro_rules! with_member {
    ($self:expr, $m:ident => $body:expr) => {
        match &$self.inner {
            Inner::Exact($m) => $body,
            Inner::Float($m) => $body,
        }
    };
}

#[pymethods]
impl Member {
    #[getter]
    fn family(&self) -> String {
        with_member!(self, m => m.descriptor.family.to_string())
    }

    #[getter]
    fn degree(&self) -> u32 {
        with_member!(self, m => m.map.degree())
    }

    #[getter]
    fn regime(&self) -> &'static str {
        match self.inner {
            Inner::Exact(_) => "exact",
            Inner::Float(_) => "float",
        }
    }

    /// `[deg R^C, deg R^σ]` per web component.
    #[getter]
    fn expected_splits(&self) -> Vec<[u32; 2]> {
        with_member!(self, m => m.descriptor.expected_splits.clone())
    }

    /// The three components as `{(i, j, k): coefficient}` dictionaries.
    fn components<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        with_member!(self, m => m.map.components().iter().map(|h| poly_terms(py, h)).collect())
    }

    /// The Jacobian determinant, of degree `3(d − 1)`.
    fn jacobian<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        with_member!(self, m => poly_terms(py, &m.map.jacobian_determinant()))
    }

    /// Image of a point given by three coordinates.
    fn apply<'py>(&self, py: Python<'py>, point: Vec<Bound<'py, PyAny>>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        if point.len() != 3 {
            return Err(WebendoError::new_err("a point has three coordinates"));
        }
        match &self.inner {
            Inner::Exact(m) => {
                let v = rationals(&point)?;
                let p = ProjPoint::new(v[0].clone(), v[1].clone(), v[2].clone()).map_err(err)?;
                let img = m.map.apply(&p).map_err(err)?;
                img.coords().iter().map(|c| value(py, c)).collect()
            }
            Inner::Float(m) => {
                let v: Vec<Complex64> = point.iter().map(|x| x.extract()).collect::<PyResult<_>>()?;
                let p = ProjPoint::new(v[0], v[1], v[2]).map_err(err)?;
                let img = m.map.apply(&p).map_err(err)?;
                img.coords().iter().map(|c| value(py, c)).collect()
            }
        }
    }

    /// Runs verification checks and returns the reports as dictionaries.
    #[pyo3(signature = (checks=None, samples=1000, tol=1e-8, seed=0, iterations=10))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        checks: Option<Vec<String>>,
        samples: usize,
        tol: f64,
        seed: u64,
        iterations: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let family = with_member!(self, m => m.descriptor.family);
        let checks: Vec<CheckName> = match checks {
            Some(names) => names.iter().map(|n| parse(n)).collect::<PyResult<_>>()?,
            None => CheckName::applicable(true, Some(family)),
        };
        let cfg = CheckConfig::new(family.name())
            .with_seed(seed)
            .with_samples(samples)
            .with_tol(tol)
            .with_iterations(iterations);
        let reports = py.detach(|| {
            with_member!(self, m => run_checks(
                &m.map,
                &m.web,
                Some(&m.lifts),
                Some(&m.descriptor.expected_splits),
                &cfg,
                &checks,
            ))
        });
        json(py, &serde_json::to_string(&reports).map_err(|e| WebendoError::new_err(e.to_string()))?)
    }

    /// Writes the map file.
    fn save(&self, path: PathBuf) -> PyResult<()> {
        with_member!(self, m => MapFile::new(&m.map, Some(m.descriptor.clone()))).write(&path).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Member(family={:?}, degree={}, regime={:?})", self.family(), self.degree(), self.regime())
    }
}

fn exact(m: webendo::Result<FamilyMember<Q>>) -> PyResult<Member> {
    Ok(Member { inner: Inner::Exact(m.map_err(err)?) })
}

fn lift(num: &[Bound<'_, PyAny>], den: &[Bound<'_, PyAny>]) -> PyResult<RatMapP1<Q>> {
    RatMapP1::from_affine(&rationals(num)?, &rationals(den)?).map_err(err)
}

fn one(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyAny>>> {
    Ok(vec![1i64.into_pyobject(py)?.into_any()])
}

/// The nodal-cubic map `f_d`.
#[pyfunction]
#[pyo3(signature = (degree, orientation="+"))]
fn nodal(degree: u32, orientation: &str) -> PyResult<Member> {
    exact(make_nodal(degree, parse::<Orientation>(orientation)?))
}

/// The conic-web map induced by `φ = num/den`, coefficients low to high.
#[pyfunction]
#[pyo3(signature = (num, den=None))]
fn ueda(py: Python<'_>, num: Vec<Bound<'_, PyAny>>, den: Option<Vec<Bound<'_, PyAny>>>) -> PyResult<Member> {
    let den = match den {
        Some(d) => d,
        None => one(py)?,
    };
    exact(make_ueda(&lift(&num, &den)?))
}

/// `[Den(x, y) : Num(x, y) : z^d]`, preserving the pencil through `[0:0:1]`.
#[pyfunction]
#[pyo3(signature = (num, den=None))]
fn pencil(py: Python<'_>, num: Vec<Bound<'_, PyAny>>, den: Option<Vec<Bound<'_, PyAny>>>) -> PyResult<Member> {
    let den = match den {
        Some(d) => d,
        None => one(py)?,
    };
    let phi = lift(&num, &den)?;
    let d = phi.degree();
    let binary = |c: &[Q]| {
        let terms: Vec<([u32; 3], Q)> = c.iter().enumerate().map(|(i, q)| ([d - i as u32, i as u32, 0], q.clone())).collect();
        HomPoly3::from_terms(d, &terms)
    };
    let p = binary(phi.denominator().coeffs()).map_err(err)?;
    let q = binary(phi.numerator().coeffs()).map_err(err)?;
    let r = HomPoly3::monomial([0, 0, d], Q::from_i64(1));
    exact(make_pencil(p, q, r))
}

/// `[p(x/z) : q(y/z) : 1]` homogenized; coefficients low to high.
#[pyfunction]
fn two_lines(p: Vec<Bound<'_, PyAny>>, q: Vec<Bound<'_, PyAny>>) -> PyResult<Member> {
    exact(make_two_lines(&rationals(&p)?, &rationals(&q)?))
}

/// `[x^d : y^d : z^d]`.
#[pyfunction]
fn three_lines(degree: u32) -> PyResult<Member> {
    exact(make_three_lines(degree))
}

/// The conic-plus-line map with lift `c·t^{±d}`.
#[pyfunction]
#[pyo3(signature = (degree, c=None, orientation="+"))]
fn conic_line(degree: u32, c: Option<Bound<'_, PyAny>>, orientation: &str) -> PyResult<Member> {
    let c = match c {
        Some(c) => rational(&c)?,
        None => Q::from_i64(1),
    };
    exact(make_conic_line(c, degree, parse::<Orientation>(orientation)?))
}

/// The map induced by `z ↦ m z + t` on the smooth cubic of lattice
/// `Z + τZ`, interpolated as a polynomial map of degree `m²`.
#[pyfunction]
#[pyo3(signature = (tau=(0.0, 1.0), mult=2, flex=0, seed=0))]
fn smooth_cubic(py: Python<'_>, tau: (f64, f64), mult: i64, flex: usize, seed: u64) -> PyResult<Member> {
    let member = py.detach(|| -> webendo::Result<FamilyMember<C64>> {
        let lattice = Lattice::new(C64::new(tau.0, tau.1))?;
        let f = make_smooth_cubic(lattice, mult, flex)?;
        let mut rng = CheckConfig::new("smooth-cubic").with_seed(seed).rng("construct");
        Ok(f.member(&mut rng)?.0)
    });
    Ok(Member { inner: Inner::Float(member.map_err(err)?) })
}

/// Reads a map file written by `save` or the command line tool.
#[pyfunction]
fn load_map(path: PathBuf) -> PyResult<Member> {
    let file = MapFile::read(&path).map_err(err)?;
    let desc = file
        .descriptor
        .clone()
        .ok_or_else(|| WebendoError::new_err("map file has no family descriptor"))?;
    match file.regime {
        Regime::Exact => {
            let map = file.to_endo::<Q>().map_err(err)?;
            let web = desc.web::<Q>().map_err(err)?;
            let lifts = desc.lifts(&map, &web).map_err(err)?;
            Ok(Member { inner: Inner::Exact(FamilyMember { descriptor: desc, map, web, lifts }) })
        }
        Regime::Float => {
            let map = file.to_endo::<C64>().map_err(err)?;
            let web = desc.web_c64().map_err(err)?;
            let lifts = desc.lifts(&map, &web).map_err(err)?;
            Ok(Member { inner: Inner::Float(FamilyMember { descriptor: desc, map, web, lifts }) })
        }
    }
}

/// Dual curve of a family's web: degree, equation and the Plücker line.
#[pyfunction]
#[pyo3(signature = (family, tau=(0.0, 1.0), held_out=50, seed=0))]
fn dual_curve<'py>(py: Python<'py>, family: &str, tau: (f64, f64), held_out: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let tag: FamilyTag = parse(family)?;
    let mut rng = CheckConfig::new(tag.name()).with_seed(seed).rng("dual");
    let out = PyDict::new(py);
    let euler = match tag {
        FamilyTag::Conic | FamilyTag::Nodal => {
            let web = rational_web::<Q>(tag).map_err(err)?;
            let comp = &web.components()[0];
            let ComponentParam::Rational(param) = &comp.param else { unreachable!("rational family") };
            let (curve, dual_param) = rational_dual(param, &mut rng).map_err(err)?;
            out.set_item("equation", poly_terms(py, curve.equation())?)?;
            EulerData {
                deg_b: comp.curve.degree() as i64,
                deg_b_dual: curve.degree() as i64,
                deg_r_psi: param.ramification().map_err(err)?.degree() as i64,
                deg_r_psi_dual: dual_param.ramification().map_err(err)?.degree() as i64,
                chi: 2,
            }
        }
        FamilyTag::SmoothCubic => {
            let lattice = Lattice::new(C64::new(tau.0, tau.1)).map_err(err)?;
            let (eq, residual) = lattice.dual_curve(held_out, &mut rng).map_err(err)?;
            out.set_item("equation", poly_terms(py, &eq)?)?;
            out.set_item("fit_residual", residual)?;
            EulerData { deg_b: 3, deg_b_dual: eq.degree() as i64, deg_r_psi: 0, deg_r_psi_dual: lattice.flexes().len() as i64, chi: 0 }
        }
        f => return Err(WebendoError::new_err(format!("dual of the {f} web is not a curve of degree ≥ 2"))),
    };
    out.set_item("degree", euler.deg_b_dual)?;
    out.set_item("plucker", euler.describe())?;
    out.set_item("plucker_holds", plucker_verify(&euler))?;
    Ok(out)
}

/// SVG drawing of `lines` real leaves of a family's web.
#[pyfunction]
#[pyo3(signature = (family, lines=60, tau=None))]
fn render_svg(family: &str, lines: usize, tau: Option<(f64, f64)>) -> PyResult<String> {
    let mut spec = RenderSpec::new(parse(family)?, lines);
    if let Some((re, im)) = tau {
        spec = spec.with_tau([re, im]);
    }
    Ok(render(&spec).map_err(err)?.svg)
}

/// Points of P¹ that are totally invariant under `φ = num/den`, as
/// `(a0, a1)` pairs.
#[pyfunction]
#[pyo3(signature = (num, den=None))]
fn totally_invariant_points(
    py: Python<'_>,
    num: Vec<Bound<'_, PyAny>>,
    den: Option<Vec<Bound<'_, PyAny>>>,
) -> PyResult<Vec<(Complex64, Complex64)>> {
    let den = match den {
        Some(d) => d,
        None => one(py)?,
    };
    let roots = tip(&lift(&num, &den)?).map_err(err)?;
    Ok(roots
        .iter()
        .map(|r| {
            let [a0, a1] = *r.point.coords();
            (Complex64::new(a0.re, a0.im), Complex64::new(a1.re, a1.im))
        })
        .collect())
}

/// `A_d` with `A_d(e1, e2, e3) = x^d + y^d + z^d`, as text in `e1, e2, e3`.
#[pyfunction]
fn newton_power_sum(d: u32) -> String {
    newton(d).to_string_with(["e1", "e2", "e3"])
}

/// Names of the verification checks.
#[pyfunction]
fn check_names(py: Python<'_>) -> PyResult<Bound<'_, PyList>> {
    PyList::new(py, CheckName::ALL.iter().map(|c| c.name()))
}

#[pymodule]
fn webendo_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("WebendoError", m.py().get_type::<WebendoError>())?;
    m.add_class::<Member>()?;
    m.add_function(wrap_pyfunction!(nodal, m)?)?;
    m.add_function(wrap_pyfunction!(ueda, m)?)?;
    m.add_function(wrap_pyfunction!(pencil, m)?)?;
    m.add_function(wrap_pyfunction!(two_lines, m)?)?;
    m.add_function(wrap_pyfunction!(three_lines, m)?)?;
    m.add_function(wrap_pyfunction!(conic_line, m)?)?;
    m.add_function(wrap_pyfunction!(smooth_cubic, m)?)?;
    m.add_function(wrap_pyfunction!(load_map, m)?)?;
    m.add_function(wrap_pyfunction!(dual_curve, m)?)?;
    m.add_function(wrap_pyfunction!(render_svg, m)?)?;
    m.add_function(wrap_pyfunction!(totally_invariant_points, m)?)?;
    m.add_function(wrap_pyfunction!(newton_power_sum, m)?)?;
    m.add_function(wrap_pyfunction!(check_names, m)?)?;
    Ok(())
}
