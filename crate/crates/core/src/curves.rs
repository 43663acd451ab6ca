//! Curves in the dual plane, their normalizations, and the webs of lines
//! they define.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::elliptic::Lattice;
use crate::field::{Field, Regime, C64, Q};
use crate::linalg::DenseMatrix;
use crate::polyalg::{
    binary_roots, implicitize, monomials, point_on_span, restrict_to_line, restriction_vanishes, BinForm,
    Divisor1, HomPoly3, P1Point,
};
use crate::projgeom::{cross, norm3, ProjLine, ProjPoint, DEFAULT_TOL};
use crate::{Error, IndeterminacyKind, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveFamily {
    Line,
    Conic,
    SmoothCubic,
    NodalCubic,
    /// Dual curves and other curves outside the web classification.
    Other,
    Union(Vec<CurveFamily>),
}

impl fmt::Display for CurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveFamily::Line => f.write_str("line"),
            CurveFamily::Conic => f.write_str("conic"),
            CurveFamily::SmoothCubic => f.write_str("smooth-cubic"),
            CurveFamily::NodalCubic => f.write_str("nodal-cubic"),
            CurveFamily::Other => f.write_str("other"),
            CurveFamily::Union(parts) => {
                let names: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "union({})", names.join(", "))
            }
        }
    }
}

/// A reduced curve with its known singular points.
#[derive(Clone, Debug)]
pub struct DualCurve<K> {
    equation: HomPoly3<K>,
    family: CurveFamily,
    singular: Vec<ProjPoint<K>>,
}

/// Largest `|∂F/∂x_i(p)|` relative to `‖F‖` on the unit representative.
fn gradient_residual<K: Field>(f: &HomPoly3<K>, p: &ProjPoint<K>) -> f64 {
    let pu = p.unit_c64();
    let fc = f.to_c64();
    let scale = fc.norm().max(f64::MIN_POSITIVE);
    (0..3).map(|v| fc.partial(v).evaluate(&pu).norm() / scale).fold(0.0, f64::max)
}

impl<K: Field> DualCurve<K> {
    /// Checks that every listed singular point annihilates the gradient.
    pub fn new(equation: HomPoly3<K>, family: CurveFamily, singular: Vec<ProjPoint<K>>) -> Result<Self> {
        if equation.is_zero() || equation.degree() == 0 {
            return Err(Error::ZeroForm);
        }
        for s in &singular {
            let ok = match K::REGIME {
                Regime::Exact => (0..3).all(|v| equation.partial(v).evaluate(s.coords()).is_negligible(0.0)),
                Regime::Float => gradient_residual(&equation, s) < 1e-8,
            };
            if !ok {
                return Err(Error::InvalidArgument(format!("listed singular point {:?} is smooth", s.unit_c64())));
            }
        }
        Ok(Self { equation, family, singular })
    }

    pub fn equation(&self) -> &HomPoly3<K> {
        &self.equation
    }

    pub fn degree(&self) -> u32 {
        self.equation.degree()
    }

    pub fn family(&self) -> &CurveFamily {
        &self.family
    }

    pub fn singular_points(&self) -> &[ProjPoint<K>] {
        &self.singular
    }

    /// Relative residual of the equation at `c`.
    pub fn residual(&self, c: &ProjPoint<K>) -> f64 {
        self.equation.relative_residual(c)
    }

    pub fn contains(&self, c: &ProjPoint<K>, tol: f64) -> bool {
        match K::REGIME {
            Regime::Exact => self.equation.evaluate_at(c).is_negligible(0.0),
            Regime::Float => self.residual(c) <= tol,
        }
    }

    /// Square-freeness, tested on the restriction to a random line.
    pub fn is_reduced<R: Rng + ?Sized>(&self, rng: &mut R) -> bool {
        let l = ProjLine::from_array([K::sample(rng), K::sample(rng), K::sample(rng)]);
        match l.map(|l| restrict_to_line(&self.equation, &l).0) {
            Ok(b) if !b.is_zero() => binary_roots(&b).map(|r| r.iter().all(|x| x.multiplicity == 1)).unwrap_or(false),
            _ => false,
        }
    }

    pub fn to_c64(&self) -> DualCurve<C64> {
        DualCurve {
            equation: self.equation.to_c64(),
            family: self.family.clone(),
            singular: self.singular.iter().map(|s| s.to_c64()).collect(),
        }
    }
}

/// Order of the lowest nonvanishing jet of `F` at `c`: 0 off the curve,
/// 1 at smooth points.
pub fn multiplicity_at<K: Field>(f: &HomPoly3<K>, c: &ProjPoint<K>, tol: f64) -> u32 {
    let pu = c.unit_c64();
    let mut layer = vec![f.clone()];
    for k in 0..=f.degree() {
        let nonzero = layer.iter().any(|g| match K::REGIME {
            Regime::Exact => !g.evaluate(c.coords()).is_negligible(0.0),
            Regime::Float => g.to_c64().evaluate(&pu).norm() > tol * f.norm().max(f64::MIN_POSITIVE),
        });
        if nonzero {
            return k;
        }
        layer = layer.iter().flat_map(|g| (0..3).map(move |v| g.partial(v))).collect();
        layer.dedup();
    }
    f.degree()
}

/// A normalization `ψ: P¹ → C` given by three binary forms.
#[derive(Clone, Debug)]
pub struct RationalParam<K> {
    comps: [BinForm<K>; 3],
    /// Parameters over singular points of the image.
    special: Vec<P1Point<K>>,
}

/// Common factor of several binary forms. Exact: Euclid. Floating: the
/// roots shared by all forms (chordal distance below `1e-6`).
pub fn common_factor<K: Field>(forms: &[BinForm<K>]) -> Result<BinForm<K>> {
    let nonzero: Vec<&BinForm<K>> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::ZeroForm);
    }
    match K::REGIME {
        Regime::Exact => Ok(nonzero.iter().skip(1).fold(nonzero[0].clone(), |g, f| g.gcd(f))),
        Regime::Float => {
            let base = binary_roots(nonzero[0])?;
            let others: Vec<_> = nonzero[1..].iter().map(|f| binary_roots(f)).collect::<Result<_>>()?;
            let mut g = BinForm::constant(K::one());
            for r in base {
                let m = others.iter().fold(r.multiplicity, |m, roots| {
                    let here: u32 = roots.iter().filter(|x| x.point.distance(&r.point) < 1e-6).map(|x| x.multiplicity).sum();
                    m.min(here)
                });
                if m > 0 {
                    let v = r.exact.clone().ok_or(Error::NotRepresentable)?.vanishing_form();
                    g = g.mul(&v.pow(m));
                }
            }
            Ok(g)
        }
    }
}

fn cross_forms<K: Field>(a: &[BinForm<K>; 3], b: &[BinForm<K>; 3]) -> [BinForm<K>; 3] {
    let c = |i: usize, j: usize| a[i].mul(&b[j]).sub(&a[j].mul(&b[i])).expect("equal degrees");
    [c(1, 2), c(2, 0), c(0, 1)]
}

impl<K: Field> RationalParam<K> {
    pub fn new(comps: [BinForm<K>; 3], special: Vec<P1Point<K>>) -> Result<Self> {
        let d = comps[0].degree();
        if comps.iter().any(|c| c.degree() != d) {
            return Err(Error::DegreeMismatch("parameter components differ in degree".into()));
        }
        if d == 0 {
            return Err(Error::InvalidDegree("constant parameterization".into()));
        }
        if common_factor(&comps)?.degree() > 0 {
            return Err(Error::CommonZero);
        }
        Ok(Self { comps, special })
    }

    pub fn degree(&self) -> u32 {
        self.comps[0].degree()
    }

    pub fn components(&self) -> &[BinForm<K>; 3] {
        &self.comps
    }

    pub fn special_parameters(&self) -> &[P1Point<K>] {
        &self.special
    }

    pub fn eval_coords(&self, a: &[K; 2]) -> [K; 3] {
        [0, 1, 2].map(|i| self.comps[i].evaluate(a))
    }

    pub fn eval(&self, a: &P1Point<K>) -> Result<ProjPoint<K>> {
        ProjPoint::from_array(self.eval_coords(a.coords()))
    }

    pub fn to_c64(&self) -> RationalParam<C64> {
        RationalParam {
            comps: [0, 1, 2].map(|i| self.comps[i].to_c64()),
            special: self.special.iter().map(|p| p.to_c64()).collect(),
        }
    }

    /// `∂ψ/∂a0 × ∂ψ/∂a1`, of degree `2m - 2`. By Euler's relation this is
    /// `ψ × ∂ψ/∂a1` divided by `a0/m`.
    pub fn tangent_forms(&self) -> [BinForm<K>; 3] {
        let d0 = [0, 1, 2].map(|i| self.comps[i].derivative(0));
        let d1 = [0, 1, 2].map(|i| self.comps[i].derivative(1));
        cross_forms(&d0, &d1)
    }

    /// The common factor of the tangent forms; its roots are the
    /// ramification points of `ψ`.
    pub fn ramification_form(&self) -> Result<BinForm<K>> {
        let t = self.tangent_forms();
        if t.iter().all(|f| f.is_zero()) {
            return Err(Error::DegenerateTangent);
        }
        common_factor(&t)
    }

    /// `R_ψ` as a divisor.
    pub fn ramification(&self) -> Result<Divisor1<K>> {
        let g = self.ramification_form()?;
        if g.degree() == 0 {
            return Ok(Divisor1 { points: Vec::new() });
        }
        Ok(Divisor1 { points: binary_roots(&g)? })
    }

    /// The dual normalization `ψ̌(a) = 𝒟 T_a C`: tangent forms with their
    /// common factor removed.
    pub fn dual(&self) -> Result<RationalParam<K>> {
        let t = self.tangent_forms();
        let g = self.ramification_form()?;
        let red = t.map(|f| {
            if f.is_zero() {
                Some(BinForm::zero(f.degree() - g.degree()))
            } else {
                f.divide_exact(&g)
            }
        });
        let [a, b, c] = red;
        let comps = [a, b, c].map(|x| x.ok_or(Error::DegenerateTangent));
        let [a, b, c] = comps;
        RationalParam::new([a?, b?, c?], Vec::new())
    }
}

/// Dual point of the tangent line at `ψ(a)`. At ramified parameters the
/// tangent forms vanish and the reduced dual parameterization supplies the
/// limiting tangent.
pub fn tangent_dual<K: Field>(param: &RationalParam<K>, a: &P1Point<K>) -> Result<ProjPoint<K>> {
    let t = param.tangent_forms();
    let v = [0, 1, 2].map(|i| t[i].evaluate(a.coords()));
    let degenerate = match K::REGIME {
        Regime::Exact => v.iter().all(|x| x.is_negligible(0.0)),
        Regime::Float => {
            let scale = t.iter().map(|f| f.norm()).fold(0.0, f64::max);
            let ac = a.to_c64();
            let an = ac.coords()[0].norm().hypot(ac.coords()[1].norm());
            norm3(&v.clone().map(|x| x.to_c64())) <= 1e-10 * scale * an.powi(t[0].degree() as i32)
        }
    };
    if !degenerate {
        return ProjPoint::from_array(v);
    }
    param.dual().and_then(|d| d.eval(a)).map_err(|_| Error::DegenerateTangent)
}

/// `π(a, b) = 𝒟 L(ψ(a), ψ(b))`, with `π(a, a) = ψ̌(a)` off the
/// ramification points.
pub fn pi_map<K: Field>(param: &RationalParam<K>, a: &P1Point<K>, b: &P1Point<K>) -> Result<ProjPoint<K>> {
    let tol = DEFAULT_TOL;
    if a.same(b, tol) {
        let g = param.ramification_form()?;
        let floor = match K::REGIME {
            Regime::Exact => 0.0,
            Regime::Float => tol * g.norm(),
        };
        if g.degree() > 0 && g.evaluate_at(a).is_negligible(floor) {
            return Err(Error::Indeterminate(IndeterminacyKind::RamifiedDiagonal));
        }
        return tangent_dual(param, a);
    }
    let pa = param.eval(a)?;
    let pb = param.eval(b)?;
    if pa.same(&pb, tol) {
        return Err(Error::Indeterminate(IndeterminacyKind::SamePointPair));
    }
    ProjPoint::from_array(cross(pa.coords(), pb.coords()))
}

/// Number of ordered parameter pairs `(a, b)`, `a != b`, with
/// `π(a, b) = target`: both parameters are roots of `ψ · target`.
pub fn pi_fiber_size<K: Field>(param: &RationalParam<K>, target: &ProjPoint<K>) -> Result<usize> {
    let t = target.coords();
    let f = param.comps[0]
        .scale(&t[0])
        .add(&param.comps[1].scale(&t[1]))?
        .add(&param.comps[2].scale(&t[2]))?;
    let roots = binary_roots(&f)?;
    let distinct = roots.len();
    Ok(distinct * distinct.saturating_sub(1))
}

/// The standard nodal cubic `u³ + v³ = uvw` with its closed-form data.
#[derive(Clone, Debug)]
pub struct NodalCubicData {
    pub curve: DualCurve<Q>,
    /// `ψ(a) = [−a² : a : a³ − 1]`.
    pub param: RationalParam<Q>,
    /// `ψ̌(a) = [2a³ + 1 : 2a + a⁴ : a²]`.
    pub dual_param: RationalParam<Q>,
    pub node: ProjPoint<Q>,
}

impl NodalCubicData {
    /// `π(a, b) = [ab(a + b) + 1 : a + b + a²b² : ab]` on affine parameters.
    pub fn pi_closed_form(a: &Q, b: &Q) -> Result<ProjPoint<Q>> {
        let s = a + b;
        let p = a * b;
        ProjPoint::new(&p * &s + Q::from_i64(1), &s + &p * &p, p)
    }
}

/// The nodal cubic `u³ + v³ = uvw` with `ψ(a) = [−a² : a : a³ − 1]`;
/// both `0` and `∞` lie over the node `[0:0:1]`.
pub fn nodal_cubic<K: Field>() -> (DualCurve<K>, RationalParam<K>) {
    let curve = DualCurve::new(
        HomPoly3::from_int_terms(3, &[([3, 0, 0], 1), ([0, 3, 0], 1), ([1, 1, 1], -1)]).unwrap(),
        CurveFamily::NodalCubic,
        vec![ProjPoint::from_ints([0, 0, 1]).unwrap()],
    )
    .expect("node is singular");
    let param = RationalParam::new(
        [BinForm::from_ints(&[0, 0, -1, 0]), BinForm::from_ints(&[0, 1, 0, 0]), BinForm::from_ints(&[-1, 0, 0, 1])],
        vec![P1Point::affine(K::from_i64(0)), P1Point::infinity()],
    )
    .unwrap();
    (curve, param)
}

pub fn nodal_cubic_data() -> NodalCubicData {
    let (curve, param) = nodal_cubic::<Q>();
    let dual_param = RationalParam::new(
        [BinForm::from_ints(&[1, 0, 0, 2, 0]), BinForm::from_ints(&[0, 2, 0, 0, 1]), BinForm::from_ints(&[0, 0, 1, 0, 0])],
        Vec::new(),
    )
    .unwrap();
    NodalCubicData { curve, param, dual_param, node: ProjPoint::from_ints([0, 0, 1]).unwrap() }
}

/// The conic `v² = uw` with `ψ(a) = [a1² : −a0 a1 : a0²]`.
pub fn conic_data<K: Field>() -> (DualCurve<K>, RationalParam<K>) {
    let curve = DualCurve::new(
        HomPoly3::from_int_terms(2, &[([0, 2, 0], 1), ([1, 0, 1], -1)]).unwrap(),
        CurveFamily::Conic,
        Vec::new(),
    )
    .unwrap();
    let param = RationalParam::new(
        [BinForm::from_ints(&[0, 0, 1]), BinForm::from_ints(&[0, -1, 0]), BinForm::from_ints(&[1, 0, 0])],
        Vec::new(),
    )
    .unwrap();
    (curve, param)
}

/// The two points `(q1, q2)` completing a coordinate apex to a basis, in
/// the order that makes the pencil parameter the natural affine
/// coordinate: `y/x` for `[0:0:1]`, `x/z` for `[0:1:0]`, `y/z` for `[1:0:0]`.
pub fn pencil_frame<K: Field>(apex: &ProjPoint<K>) -> [[K; 3]; 2] {
    let e = |i: usize| {
        let mut v = [K::zero(), K::zero(), K::zero()];
        v[i] = K::one();
        v
    };
    let c = apex.coords();
    let k = (0..3)
        .max_by(|&a, &b| c[a].abs_f64().partial_cmp(&c[b].abs_f64()).unwrap().then(b.cmp(&a)))
        .unwrap();
    match k {
        2 => [e(0), e(1)],
        1 => [e(2), e(0)],
        _ => [e(2), e(1)],
    }
}

/// The line `{c : c · apex = 0}` of the dual plane, parameterized by the
/// lines `(a0 q1 + a1 q2) × apex` through the apex.
pub fn pencil_data<K: Field>(apex: &ProjPoint<K>) -> (DualCurve<K>, RationalParam<K>) {
    let [q1, q2] = pencil_frame(apex);
    let ap = apex.coords();
    let comps = [0, 1, 2].map(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        // (v × apex)_i = v_j apex_k − v_k apex_j with v = a0 q1 + a1 q2
        BinForm::from_coeffs(vec![
            q1[j].clone() * ap[k].clone() - q1[k].clone() * ap[j].clone(),
            q2[j].clone() * ap[k].clone() - q2[k].clone() * ap[j].clone(),
        ])
    });
    let curve = DualCurve::new(HomPoly3::linear(ap), CurveFamily::Line, Vec::new()).unwrap();
    (curve, RationalParam::new(comps, Vec::new()).expect("independent frame"))
}

/// How points of a web component are produced.
#[derive(Clone, Debug)]
pub enum ComponentParam<K> {
    Rational(RationalParam<K>),
    Elliptic(Lattice),
}

#[derive(Clone, Debug)]
pub struct WebComponent<K> {
    pub curve: DualCurve<K>,
    pub param: ComponentParam<K>,
}

impl<K: Field> WebComponent<K> {
    pub fn rational(curve: DualCurve<K>, param: RationalParam<K>) -> Self {
        Self { curve, param: ComponentParam::Rational(param) }
    }

    /// A random point of the component.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ProjPoint<K>> {
        match &self.param {
            ComponentParam::Rational(p) => p.eval(&P1Point::affine(K::sample(rng))),
            ComponentParam::Elliptic(l) => {
                let z = l.random_point(rng);
                let e = l.embed(&z);
                let c = (*e.coords()).map(K::from_c64);
                match c {
                    [Some(a), Some(b), Some(c)] => ProjPoint::new(a, b, c),
                    _ => Err(Error::NotRepresentable),
                }
            }
        }
    }
}

/// The web of lines `𝒟c`, `c ∈ C`, for a reduced curve `C` given by its
/// components.
#[derive(Clone, Debug)]
pub struct WebSpec<K> {
    curve: DualCurve<K>,
    components: Vec<WebComponent<K>>,
}

impl<K: Field> WebSpec<K> {
    /// Builds the union. Singular points of the union are the components'
    /// singular points together with pairwise intersections that are
    /// representable in `K`.
    pub fn new(components: Vec<WebComponent<K>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("a web needs at least one component".into()));
        }
        if components.len() == 1 {
            let curve = components[0].curve.clone();
            return Ok(Self { curve, components });
        }
        let mut eq = components[0].curve.equation().clone();
        for c in &components[1..] {
            eq = eq.mul(c.curve.equation());
        }
        let mut singular: Vec<ProjPoint<K>> = Vec::new();
        for c in &components {
            singular.extend(c.curve.singular_points().iter().cloned());
        }
        for i in 0..components.len() {
            for j in i + 1..components.len() {
                for p in intersect_with_line(&components[i].curve, &components[j].curve)? {
                    if !singular.iter().any(|s| s.same(&p, 1e-9)) {
                        singular.push(p);
                    }
                }
            }
        }
        singular.sort_by_key(|p| p.sort_key());
        let family = CurveFamily::Union(components.iter().map(|c| c.curve.family().clone()).collect());
        let curve = DualCurve::new(eq, family, singular)?;
        Ok(Self { curve, components })
    }

    pub fn curve(&self) -> &DualCurve<K> {
        &self.curve
    }

    pub fn components(&self) -> &[WebComponent<K>] {
        &self.components
    }

    pub fn degree(&self) -> u32 {
        self.curve.degree()
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }

    pub fn to_c64(&self) -> WebSpec<C64> {
        WebSpec {
            curve: self.curve.to_c64(),
            components: self
                .components
                .iter()
                .map(|c| WebComponent {
                    curve: c.curve.to_c64(),
                    param: match &c.param {
                        ComponentParam::Rational(p) => ComponentParam::Rational(p.to_c64()),
                        ComponentParam::Elliptic(l) => ComponentParam::Elliptic(l.clone()),
                    },
                })
                .collect(),
        }
    }
}

/// Intersection points of two components when one is a line, restricted
/// to those representable in `K`.
fn intersect_with_line<K: Field>(a: &DualCurve<K>, b: &DualCurve<K>) -> Result<Vec<ProjPoint<K>>> {
    let (line, other) = match (a.degree(), b.degree()) {
        (1, _) => (a, b),
        (_, 1) => (b, a),
        _ => return Ok(Vec::new()),
    };
    let l = ProjLine::from_array(line.equation().coeffs_linear())?;
    let (form, basis) = restrict_to_line(other.equation(), &l);
    if restriction_vanishes(&form, other.equation(), 1e-12) {
        return Err(Error::InvalidArgument("web components share a line".into()));
    }
    let mut out = Vec::new();
    for r in binary_roots(&form)? {
        if let Some(e) = r.exact {
            out.push(point_on_span(&basis, &e)?);
        }
    }
    Ok(out)
}

/// One line of the web through a point.
#[derive(Clone, Debug)]
pub struct Leaf<K> {
    /// The point `c ∈ C` whose dual line is the leaf.
    pub point: ProjPoint<C64>,
    pub exact: Option<ProjPoint<K>>,
    pub multiplicity: u32,
}

impl<K: Field> Leaf<K> {
    /// The leaf as a line of the plane.
    pub fn line(&self) -> ProjLine<C64> {
        self.point.dualize()
    }
}

/// The web lines through `p`: roots of `C` restricted to the line `𝒟p`
/// of the dual plane, sorted deterministically.
pub fn leaves_through<K: Field>(web: &WebSpec<K>, p: &ProjPoint<K>) -> Result<Vec<Leaf<K>>> {
    let l = p.dualize();
    let (form, basis) = restrict_to_line(web.curve().equation(), &l);
    if restriction_vanishes(&form, web.curve().equation(), 1e-12) {
        return Err(Error::WholePencil);
    }
    let basis_c = [basis[0].to_c64(), basis[1].to_c64()];
    let mut leaves = Vec::new();
    for r in binary_roots(&form)? {
        let point = point_on_span(&basis_c, &r.point)?;
        let exact = match &r.exact {
            Some(e) => Some(point_on_span(&basis, e)?),
            None => None,
        };
        leaves.push(Leaf { point, exact, multiplicity: r.multiplicity });
    }
    leaves.sort_by_key(|x| x.point.sort_key());
    Ok(leaves)
}

/// Dual curve of a parameterized curve: the implicit equation of `ψ̌`,
/// with the images of ramification points of `ψ̌` (the cusps) recorded
/// as singular points when they are representable in `K`.
pub fn dual_curve<K: Field, R: Rng + ?Sized>(param: &RationalParam<K>, rng: &mut R) -> Result<(DualCurve<K>, RationalParam<K>)> {
    let dual = param.dual()?;
    let eq = implicitize(dual.components(), dual.degree().max(2) + 2, rng)?;
    let mut singular = Vec::new();
    for r in dual.ramification()?.points {
        if let Some(e) = r.exact {
            singular.push(dual.eval(&e)?);
        }
    }
    let family = match eq.degree() {
        1 => CurveFamily::Line,
        2 => CurveFamily::Conic,
        _ => CurveFamily::Other,
    };
    Ok((DualCurve::new(eq, family, singular)?, dual))
}

/// Best-effort numeric search for singular points: Gauss–Newton on the
/// gradient in each affine chart from seeded random starts.
pub fn find_singular_points<R: Rng + ?Sized>(f: &HomPoly3<C64>, starts: usize, rng: &mut R) -> Vec<ProjPoint<C64>> {
    let grads = [f.partial(0), f.partial(1), f.partial(2)];
    let hess: Vec<Vec<HomPoly3<C64>>> = grads.iter().map(|g| (0..3).map(|v| g.partial(v)).collect()).collect();
    let mut found: Vec<ProjPoint<C64>> = Vec::new();
    for chart in 0..3 {
        let free: Vec<usize> = (0..3).filter(|&v| v != chart).collect();
        for _ in 0..starts {
            let mut x = [C64::sample(rng), C64::sample(rng), C64::sample(rng)];
            x[chart] = C64::new(1.0, 0.0);
            for _ in 0..60 {
                let r: Vec<C64> = grads.iter().map(|g| g.evaluate(&x)).collect();
                let jac = DenseMatrix::from_rows(
                    (0..3).map(|i| free.iter().map(|&v| hess[i][v].evaluate(&x)).collect()).collect(),
                );
                // Normal equations J^H J dx = -J^H r.
                let jh = |i: usize, j: usize| jac.get(i, j).conj();
                let mut n = DenseMatrix::<C64>::zeros(2, 2);
                let mut rhs = vec![C64::new(0.0, 0.0); 2];
                for a in 0..2 {
                    for b in 0..2 {
                        n.set(a, b, (0..3).map(|i| jh(i, a) * jac.get(i, b)).sum());
                    }
                    rhs[a] = -(0..3).map(|i| jh(i, a) * r[i]).sum::<C64>();
                }
                let Ok(dx) = n.solve(&rhs, 1e-14) else { break };
                for (k, &v) in free.iter().enumerate() {
                    x[v] += dx[k];
                }
                if dx.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-14 {
                    break;
                }
            }
            let Ok(p) = ProjPoint::from_array(x) else { continue };
            if !x.iter().all(|z| z.is_finite()) {
                continue;
            }
            let ok = f.relative_residual(&p) < 1e-9 && gradient_residual(f, &p) < 1e-9;
            if ok && !found.iter().any(|q| q.same(&p, 1e-6)) {
                found.push(p);
            }
        }
    }
    found.sort_by_key(|p| p.sort_key());
    found
}

/// The four degrees and Euler characteristic in the Plücker-type formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EulerData {
    pub deg_b: i64,
    pub deg_b_dual: i64,
    pub deg_r_psi: i64,
    pub deg_r_psi_dual: i64,
    pub chi: i64,
}

impl EulerData {
    /// `(2 deg B − deg B̌ − deg R_ψ, 2 deg B̌ − deg B − deg R_ψ̌)`.
    pub fn sides(&self) -> (i64, i64) {
        (
            2 * self.deg_b - self.deg_b_dual - self.deg_r_psi,
            2 * self.deg_b_dual - self.deg_b - self.deg_r_psi_dual,
        )
    }

    /// Human-readable check line, e.g. `2·3−4−0 = 2 = 2·4−3−3`.
    pub fn describe(&self) -> String {
        let (l, r) = self.sides();
        let mid = if l == r && l == self.chi { l.to_string() } else { format!("{l} vs {r} vs chi {}", self.chi) };
        format!(
            "2·{}−{}−{} = {} = 2·{}−{}−{}",
            self.deg_b, self.deg_b_dual, self.deg_r_psi, mid, self.deg_b_dual, self.deg_b, self.deg_r_psi_dual
        )
    }
}

pub fn plucker_verify(e: &EulerData) -> bool {
    let (l, r) = e.sides();
    l == e.chi && r == e.chi
}

impl<K: Field> HomPoly3<K> {
    /// Coefficients `(a, b, c)` of a linear form `ax + by + cz`.
    pub fn coeffs_linear(&self) -> [K; 3] {
        assert_eq!(self.degree(), 1, "not a linear form");
        let m = monomials(1);
        [0, 1, 2].map(|v| self.coeff(m[v]).clone())
    }
}
