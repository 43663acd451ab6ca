//! Constructors for the classified web-preserving maps: four families with
//! an irreducible web and three with a reducible one.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::curves::{conic_data, leaves_through, nodal_cubic, pencil_data, WebComponent, WebSpec};
use crate::elliptic::{EllipticEndo, Lattice};
use crate::field::{Field, Regime, C64};
use crate::linalg::DenseMatrix;
use crate::polyalg::{
    interpolate_endo, newton_power_sum, symmetric_reduce, BiForm, BinForm, EndoP2, HomPoly3, Interpolation,
    PlaneMap, RatMapP1,
};
use crate::projgeom::{meet, ProjLine, ProjPoint};
use crate::{Error, Result};

/// Default leaf-separation margin for smooth-cubic evaluation.
pub const LEAF_MARGIN: f64 = 1e-4;
/// Default bound on the spread of pairwise image-line intersections.
pub const CONCURRENCY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyTag {
    Pencil,
    Conic,
    SmoothCubic,
    Nodal,
    TwoLines,
    ThreeLines,
    ConicLine,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 7] = [
        FamilyTag::Pencil,
        FamilyTag::Conic,
        FamilyTag::SmoothCubic,
        FamilyTag::Nodal,
        FamilyTag::TwoLines,
        FamilyTag::ThreeLines,
        FamilyTag::ConicLine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::Pencil => "pencil",
            FamilyTag::Conic => "conic",
            FamilyTag::SmoothCubic => "smooth-cubic",
            FamilyTag::Nodal => "nodal",
            FamilyTag::TwoLines => "two-lines",
            FamilyTag::ThreeLines => "three-lines",
            FamilyTag::ConicLine => "conic-line",
        }
    }

    pub fn is_reducible(self) -> bool {
        matches!(self, FamilyTag::TwoLines | FamilyTag::ThreeLines | FamilyTag::ConicLine)
    }

    /// Expected `(deg R_f^C, deg R_f^σ)` for one web component.
    pub fn expected_split(self, d: u32) -> [u32; 2] {
        let k = d - 1;
        match self {
            FamilyTag::SmoothCubic => [0, 3 * k],
            FamilyTag::Nodal => [k, 2 * k],
            _ => [2 * k, k],
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Orientation {
    pub fn sign(self) -> i32 {
        match self {
            Orientation::Plus => 1,
            Orientation::Minus => -1,
        }
    }
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Orientation::Plus),
            "-" | "minus" => Ok(Orientation::Minus),
            _ => Err(Error::InvalidArgument(format!("orientation must be + or -, got {s:?}"))),
        }
    }
}

/// `a ↦ N(a)/D(a)` with coefficients listed from low to high degree in
/// lossless text form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

impl AffineMap {
    pub fn from_map<K: Field>(phi: &RatMapP1<K>) -> Self {
        Self {
            num: phi.numerator().coeffs().iter().map(|c| c.to_text()).collect(),
            den: phi.denominator().coeffs().iter().map(|c| c.to_text()).collect(),
        }
    }

    pub fn to_map<K: Field>(&self) -> Result<RatMapP1<K>> {
        let num = parse_list::<K>(&self.num)?;
        let den = parse_list::<K>(&self.den)?;
        RatMapP1::from_affine(&num, &den)
    }
}

fn parse_list<K: Field>(v: &[String]) -> Result<Vec<K>> {
    v.iter().map(|s| K::parse_text(s)).collect()
}

/// Which family a map belongs to, its parameters, and the expected
/// ramification split per web component.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FamilyDescriptor {
    pub family: FamilyTag,
    pub degree: u32,
    pub regime: Regime,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Orientation>,
    /// The lift on the conic (conic and conic-line families).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<AffineMap>,
    /// Component polynomials of the two-lines family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mult: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flex: Option<usize>,
    /// `[deg R_f^C, deg R_f^σ]` for each web component, in web order.
    pub expected_splits: Vec<[u32; 2]>,
}

impl FamilyDescriptor {
    fn new(family: FamilyTag, degree: u32, regime: Regime) -> Self {
        let components = match family {
            FamilyTag::TwoLines | FamilyTag::ConicLine => 2,
            FamilyTag::ThreeLines => 3,
            _ => 1,
        };
        Self {
            family,
            degree,
            regime,
            orientation: None,
            phi: None,
            p: None,
            q: None,
            tau: None,
            mult: None,
            flex: None,
            expected_splits: vec![family.expected_split(degree); components],
        }
    }

    /// The web of the family. Smooth cubics are only available over `C64`.
    pub fn web<K: Field>(&self) -> Result<WebSpec<K>> {
        rational_web(self.family)
    }

    /// The web over `C64`, including the smooth-cubic case.
    pub fn web_c64(&self) -> Result<WebSpec<C64>> {
        match self.family {
            FamilyTag::SmoothCubic => Ok(self.lattice()?.web()),
            f => rational_web(f),
        }
    }

    pub fn lattice(&self) -> Result<Lattice> {
        let t = self.tau.ok_or_else(|| Error::InvalidArgument("descriptor lacks tau".into()))?;
        Lattice::new(C64::new(t[0], t[1]))
    }

    pub fn elliptic_endo(&self) -> Result<EllipticEndo> {
        let l = self.lattice()?;
        let m = self.mult.ok_or_else(|| Error::InvalidArgument("descriptor lacks mult".into()))?;
        let k = self.flex.unwrap_or(0);
        let t = *l.flexes().get(k).ok_or_else(|| Error::InvalidArgument(format!("flex index {k} > 8")))?;
        EllipticEndo::new(l, m, t)
    }

    /// Lifts of `map` to every component of `web`: line components use the
    /// pencil projection of `map`, curved components use the recorded
    /// parameters.
    pub fn lifts<K: Field>(&self, map: &EndoP2<K>, web: &WebSpec<K>) -> Result<Vec<Lift<K>>> {
        web.components()
            .iter()
            .map(|comp| {
                if comp.curve.degree() == 1 {
                    let apex = ProjPoint::from_array(comp.curve.equation().coeffs_linear())?;
                    return Ok(Lift::Rational(pencil_lift(map, &apex)?));
                }
                match self.family {
                    FamilyTag::Nodal => {
                        let s = self.orientation.unwrap_or(Orientation::Plus).sign();
                        Ok(Lift::Rational(RatMapP1::power(K::one(), s * self.degree as i32)?))
                    }
                    FamilyTag::Conic | FamilyTag::ConicLine => {
                        let phi = self.phi.as_ref().ok_or_else(|| Error::InvalidArgument("descriptor lacks phi".into()))?;
                        Ok(Lift::Rational(phi.to_map()?))
                    }
                    FamilyTag::SmoothCubic => Ok(Lift::Elliptic(self.elliptic_endo()?)),
                    f => Err(Error::InvalidArgument(format!("family {f} has no curved component"))),
                }
            })
            .collect()
    }
}

/// The self-map of a web component's normalization induced by `f`.
#[derive(Clone, Debug)]
pub enum Lift<K> {
    Rational(RatMapP1<K>),
    Elliptic(EllipticEndo),
}

/// A constructed map with its web and the lifts to the web components.
#[derive(Clone, Debug)]
pub struct FamilyMember<K> {
    pub descriptor: FamilyDescriptor,
    pub map: EndoP2<K>,
    pub web: WebSpec<K>,
    pub lifts: Vec<Lift<K>>,
}

impl<K: Field> FamilyMember<K> {
    fn assemble(descriptor: FamilyDescriptor, map: EndoP2<K>, web: WebSpec<K>) -> Result<Self> {
        let lifts = descriptor.lifts(&map, &web)?;
        Ok(Self { descriptor, map, web, lifts })
    }

    pub fn degree(&self) -> u32 {
        self.map.degree()
    }
}

fn coord<K: Field>(i: usize) -> ProjPoint<K> {
    let mut v = [0, 0, 0];
    v[i] = 1;
    ProjPoint::from_ints(v).expect("unit vector")
}

fn pencil_component<K: Field>(apex: usize) -> WebComponent<K> {
    let (curve, param) = pencil_data(&coord::<K>(apex));
    WebComponent::rational(curve, param)
}

/// The standard web of a family with rational components.
pub fn rational_web<K: Field>(family: FamilyTag) -> Result<WebSpec<K>> {
    let conic = || {
        let (c, p) = conic_data::<K>();
        WebComponent::rational(c, p)
    };
    let comps = match family {
        FamilyTag::Pencil => vec![pencil_component(2)],
        FamilyTag::Conic => vec![conic()],
        FamilyTag::Nodal => {
            let (c, p) = nodal_cubic::<K>();
            vec![WebComponent::rational(c, p)]
        }
        FamilyTag::TwoLines => vec![pencil_component(1), pencil_component(0)],
        FamilyTag::ThreeLines => vec![pencil_component(0), pencil_component(1), pencil_component(2)],
        FamilyTag::ConicLine => vec![conic(), pencil_component(1)],
        FamilyTag::SmoothCubic => {
            return Err(Error::InvalidArgument("the smooth-cubic web needs a lattice".into()))
        }
    };
    WebSpec::new(comps)
}

/// The map induced on the pencil through `apex`: with the frame `(q1, q2)`
/// of `pencil_frame`, `f(a0 q1 + a1 q2) = α q1 + β q2 + γ·apex` and the
/// lift is `[α : β]`.
pub fn pencil_lift<K: Field>(f: &EndoP2<K>, apex: &ProjPoint<K>) -> Result<RatMapP1<K>> {
    let [q1, q2] = crate::curves::pencil_frame(apex);
    let ap = apex.coords();
    let subs = [0, 1, 2].map(|i| BinForm::from_coeffs(vec![q1[i].clone(), q2[i].clone()]));
    let images: Vec<BinForm<K>> =
        f.components().iter().map(|c| c.substitute_binary(&subs)).collect::<Result<_>>()?;
    let m = DenseMatrix::from_rows((0..3).map(|i| vec![q1[i].clone(), q2[i].clone(), ap[i].clone()]).collect());
    // Rows of m⁻¹ give α and β as combinations of the image forms.
    let mut inv_rows = vec![vec![K::zero(); 3]; 3];
    for j in 0..3 {
        let mut e = vec![K::zero(); 3];
        e[j] = K::one();
        let col = m.solve(&e, 1e-14)?;
        for i in 0..3 {
            inv_rows[i][j] = col[i].clone();
        }
    }
    let combo = |row: &[K]| -> Result<BinForm<K>> {
        let mut acc = BinForm::zero(f.degree());
        for (c, g) in row.iter().zip(&images) {
            acc = acc.add(&g.scale(c))?;
        }
        Ok(acc)
    };
    RatMapP1::new(combo(&inv_rows[1])?, combo(&inv_rows[0])?)
}

/// Pencil map `[P(x,y) : Q(x,y) : R(x,y,z)]` preserving the lines through
/// `[0:0:1]`.
pub fn make_pencil<K: Field>(p: HomPoly3<K>, q: HomPoly3<K>, r: HomPoly3<K>) -> Result<FamilyMember<K>> {
    let d = p.degree();
    if q.degree() != d || r.degree() != d {
        return Err(Error::DegreeMismatch(format!("degrees {}, {}, {}", d, q.degree(), r.degree())));
    }
    if d < 2 {
        return Err(Error::InvalidDegree(format!("degree {d} < 2")));
    }
    if p.involves(2) || q.involves(2) {
        return Err(Error::InvalidArgument("P and Q must not involve z".into()));
    }
    let map = EndoP2::new([p, q, r])?;
    let desc = FamilyDescriptor::new(FamilyTag::Pencil, d, K::REGIME);
    FamilyMember::assemble(desc, map, rational_web(FamilyTag::Pencil)?)
}

/// The unique `f` with `f ∘ π = π ∘ (φ, φ)` for
/// `π(a, b) = [a0b0 : a0b1 + a1b0 : a1b1]`.
pub fn ueda_map<K: Field>(phi: &RatMapP1<K>) -> Result<EndoP2<K>> {
    let (n, dd) = (phi.numerator(), phi.denominator());
    let sym = [BiForm::product(dd, dd)?, BiForm::symmetrized_product(dd, n)?, BiForm::product(n, n)?];
    let reduce = |s: &BiForm<K>| symmetric_reduce(s, 1e-10);
    EndoP2::new([reduce(&sym[0])?, reduce(&sym[1])?, reduce(&sym[2])?])
}

/// Map preserving the web of the conic, induced by `φ` on `P¹`.
pub fn make_ueda<K: Field>(phi: &RatMapP1<K>) -> Result<FamilyMember<K>> {
    if phi.degree() < 2 {
        return Err(Error::InvalidDegree(format!("deg φ = {} < 2", phi.degree())));
    }
    let map = ueda_map(phi)?;
    let mut desc = FamilyDescriptor::new(FamilyTag::Conic, phi.degree(), K::REGIME);
    desc.phi = Some(AffineMap::from_map(phi));
    FamilyMember::assemble(desc, map, rational_web(FamilyTag::Conic)?)
}

fn swap_xy<K: Field>(h: &HomPoly3<K>) -> HomPoly3<K> {
    let mut out = HomPoly3::zero(h.degree());
    for (e, c) in h.terms() {
        out = out.add(&HomPoly3::monomial([e[1], e[0], e[2]], c.clone())).expect("equal degrees");
    }
    out
}

/// `(A_d(x,y,1), A_d(y,x,1))` homogenized, with the output coordinates
/// swapped for the orientation `−`.
pub fn make_nodal<K: Field>(d: u32, orientation: Orientation) -> Result<FamilyMember<K>> {
    if d < 2 {
        return Err(Error::InvalidDegree(format!("degree {d} < 2")));
    }
    let a = newton_power_sum(d).dehomogenized_affine::<K>(d);
    let b = swap_xy(&a);
    let z = HomPoly3::monomial([0, 0, d], K::one());
    let comps = match orientation {
        Orientation::Plus => [a, b, z],
        Orientation::Minus => [b, a, z],
    };
    let mut desc = FamilyDescriptor::new(FamilyTag::Nodal, d, K::REGIME);
    desc.orientation = Some(orientation);
    FamilyMember::assemble(desc, EndoP2::new(comps)?, rational_web(FamilyTag::Nodal)?)
}

fn effective_degree<K: Field>(c: &[K]) -> Option<usize> {
    c.iter().rposition(|x| !x.is_negligible(0.0))
}

fn homogenized_in<K: Field>(c: &[K], var: usize, d: u32) -> HomPoly3<K> {
    let mut out = HomPoly3::zero(d);
    for (i, x) in c.iter().enumerate() {
        let mut e = [0, 0, d - i as u32];
        e[var] = i as u32;
        out = out.add(&HomPoly3::monomial(e, x.clone())).expect("equal degrees");
    }
    out
}

/// Product map `(p(x), q(y))` homogenized; `p` and `q` are affine
/// coefficient lists from low to high degree.
pub fn make_two_lines<K: Field>(p: &[K], q: &[K]) -> Result<FamilyMember<K>> {
    let (dp, dq) = (effective_degree(p), effective_degree(q));
    if dp != dq {
        return Err(Error::DegreeMismatch(format!("deg p = {dp:?}, deg q = {dq:?}")));
    }
    let d = dp.unwrap_or(0) as u32;
    if d < 2 {
        return Err(Error::InvalidDegree(format!("degree {d} < 2")));
    }
    let (p, q) = (&p[..=d as usize], &q[..=d as usize]);
    let map = EndoP2::new([homogenized_in(p, 0, d), homogenized_in(q, 1, d), HomPoly3::monomial([0, 0, d], K::one())])?;
    let mut desc = FamilyDescriptor::new(FamilyTag::TwoLines, d, K::REGIME);
    desc.p = Some(p.iter().map(|c| c.to_text()).collect());
    desc.q = Some(q.iter().map(|c| c.to_text()).collect());
    FamilyMember::assemble(desc, map, rational_web(FamilyTag::TwoLines)?)
}

/// `[x^d : y^d : z^d]` with the three coordinate pencils.
pub fn make_three_lines<K: Field>(d: u32) -> Result<FamilyMember<K>> {
    if d < 2 {
        return Err(Error::InvalidDegree(format!("degree {d} < 2")));
    }
    let comps = [0, 1, 2].map(|i| {
        let mut e = [0, 0, 0];
        e[i] = d;
        HomPoly3::monomial(e, K::one())
    });
    let desc = FamilyDescriptor::new(FamilyTag::ThreeLines, d, K::REGIME);
    FamilyMember::assemble(desc, EndoP2::new(comps)?, rational_web(FamilyTag::ThreeLines)?)
}

/// The conic map of `φ(t) = c t^{±d}` with the web of the conic and the
/// line `v = 0` through its two totally invariant points.
pub fn make_conic_line<K: Field>(c: K, d: u32, orientation: Orientation) -> Result<FamilyMember<K>> {
    if d < 2 {
        return Err(Error::InvalidDegree(format!("degree {d} < 2")));
    }
    if c.is_negligible(0.0) {
        return Err(Error::InvalidArgument("c must be nonzero".into()));
    }
    let phi = RatMapP1::power(c, orientation.sign() * d as i32)?;
    let map = ueda_map(&phi)?;
    let mut desc = FamilyDescriptor::new(FamilyTag::ConicLine, d, K::REGIME);
    desc.orientation = Some(orientation);
    desc.phi = Some(AffineMap::from_map(&phi));
    FamilyMember::assemble(desc, map, rational_web(FamilyTag::ConicLine)?)
}

/// Image of a point under the smooth-cubic map, with diagnostics.
#[derive(Clone, Debug)]
pub struct NumericImage {
    pub point: ProjPoint<C64>,
    /// Largest distance between the three pairwise intersections of the
    /// image lines.
    pub spread: f64,
    /// Smallest distance between the three leaves through the source.
    pub separation: f64,
}

/// The plane map induced by `z ↦ mz + t` on the web of a smooth cubic,
/// evaluated pointwise through the leaves.
#[derive(Clone, Debug)]
pub struct NumericEndo {
    web: WebSpec<C64>,
    endo: EllipticEndo,
    flex: usize,
    margin: f64,
    tol: f64,
}

/// `z ↦ mz + t` with `t` the flex of index `flex` (`(j + kτ)/3`,
/// index `3j + k`).
pub fn make_smooth_cubic(lattice: Lattice, m: i64, flex: usize) -> Result<NumericEndo> {
    let t = *lattice
        .flexes()
        .get(flex)
        .ok_or_else(|| Error::InvalidArgument(format!("flex index {flex} > 8")))?;
    let endo = EllipticEndo::new(lattice, m, t)?;
    Ok(NumericEndo::from_endo(endo, flex))
}

impl NumericEndo {
    /// Any `z ↦ mz + t`; with a non-flex `t` the leaves' images are not
    /// concurrent and evaluation reports `InconsistentImage`.
    pub fn from_endo(endo: EllipticEndo, flex: usize) -> Self {
        Self { web: endo.lattice().web(), endo, flex, margin: LEAF_MARGIN, tol: CONCURRENCY_TOL }
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn web(&self) -> &WebSpec<C64> {
        &self.web
    }

    pub fn endo(&self) -> &EllipticEndo {
        &self.endo
    }

    pub fn lattice(&self) -> &Lattice {
        self.endo.lattice()
    }

    /// The induced map `g` on the cubic `C` of the dual plane.
    pub fn induced(&self, c: &ProjPoint<C64>) -> Result<ProjPoint<C64>> {
        let l = self.lattice();
        Ok(l.embed(&self.endo.apply(&l.invert(c)?)))
    }

    /// Images `𝒟 g(c_i)` of the three leaves through `p`, and the smallest
    /// pairwise leaf distance.
    pub fn image_lines(&self, p: &ProjPoint<C64>) -> Result<(Vec<ProjLine<C64>>, f64)> {
        let leaves = leaves_through(&self.web, p)?;
        let sep = if leaves.len() < 3 || leaves.iter().any(|l| l.multiplicity > 1) {
            0.0
        } else {
            let mut s = f64::INFINITY;
            for i in 0..3 {
                for j in i + 1..3 {
                    s = s.min(leaves[i].point.distance(&leaves[j].point));
                }
            }
            s
        };
        if sep < self.margin {
            return Err(Error::NearCriticalPoint { separation: sep, margin: self.margin });
        }
        let lines = leaves.iter().map(|leaf| Ok(self.induced(&leaf.point)?.dualize())).collect::<Result<_>>()?;
        Ok((lines, sep))
    }

    pub fn evaluate(&self, p: &ProjPoint<C64>) -> Result<NumericImage> {
        let (lines, separation) = self.image_lines(p)?;
        let mut meets = Vec::with_capacity(3);
        let mut best = (0usize, -1.0f64);
        for (k, (i, j)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
            let angle = lines[i].to_c64().distance(&lines[j]);
            if angle > best.1 {
                best = (k, angle);
            }
            meets.push(meet(&lines[i], &lines[j], 1e-14)?);
        }
        let mut spread = 0.0f64;
        for i in 0..3 {
            for j in i + 1..3 {
                spread = spread.max(meets[i].distance(&meets[j]));
            }
        }
        Ok(NumericImage { point: meets[best.0].clone(), spread, separation })
    }

    /// Recovers the polynomial map of degree `m²` from `samples` generic
    /// point evaluations.
    pub fn to_polynomial<R: Rng + ?Sized>(&self, samples: usize, rng: &mut R) -> Result<Interpolation> {
        let mut pairs = Vec::with_capacity(samples);
        let mut attempts = 0;
        while pairs.len() < samples {
            attempts += 1;
            if attempts > 20 * samples {
                return Err(Error::RankDeficient("too few evaluable sample points".into()));
            }
            let p = ProjPoint::new(C64::sample(rng), C64::sample(rng), C64::sample(rng))?;
            match self.evaluate(&p) {
                Ok(img) if img.spread <= self.tol => pairs.push((p, img.point)),
                Ok(_) | Err(Error::NearCriticalPoint { .. }) | Err(Error::NotOnCurve(_)) => {}
                Err(e) => return Err(e),
            }
        }
        interpolate_endo(&pairs, self.endo.degree(), 1e-6)
    }

    pub fn descriptor(&self) -> FamilyDescriptor {
        let mut desc = FamilyDescriptor::new(FamilyTag::SmoothCubic, self.endo.degree(), Regime::Float);
        let tau = self.lattice().tau();
        desc.tau = Some([tau.re, tau.im]);
        desc.mult = Some(self.endo.multiplier());
        desc.flex = Some(self.flex);
        desc
    }

    /// The interpolated polynomial map packaged as a family member.
    pub fn member<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(FamilyMember<C64>, Interpolation)> {
        let n = 3 * crate::polyalg::monomial_count(self.endo.degree()) + 30;
        let interp = self.to_polynomial(n, rng)?;
        let member = FamilyMember {
            descriptor: self.descriptor(),
            map: interp.map.clone(),
            web: self.web.clone(),
            lifts: vec![Lift::Elliptic(self.endo.clone())],
        };
        Ok((member, interp))
    }
}

impl PlaneMap<C64> for NumericEndo {
    fn algebraic_degree(&self) -> u32 {
        self.endo.degree()
    }

    fn apply(&self, p: &ProjPoint<C64>) -> Result<ProjPoint<C64>> {
        let img = self.evaluate(p)?;
        if img.spread > self.tol {
            return Err(Error::InconsistentImage(img.spread));
        }
        Ok(img.point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(terms: &[([u32; 3], i64)], d: u32) -> HomPoly3<Q> {
        HomPoly3::from_int_terms(d, terms).unwrap()
    }

    #[test]
    fn nodal_degree_two_matches_closed_form() {
        let m = make_nodal::<Q>(2, Orientation::Plus).unwrap();
        let c = m.map.components();
        assert_eq!(c[0], poly(&[([2, 0, 0], 1), ([0, 1, 1], -2)], 2));
        assert_eq!(c[1], poly(&[([0, 2, 0], 1), ([1, 0, 1], -2)], 2));
        assert_eq!(c[2], poly(&[([0, 0, 2], 1)], 2));
        let minus = make_nodal::<Q>(2, Orientation::Minus).unwrap();
        assert_eq!(minus.map.components()[0], c[1]);
    }

    #[test]
    fn nodal_degree_three() {
        let m = make_nodal::<Q>(3, Orientation::Plus).unwrap();
        let want = poly(&[([3, 0, 0], 1), ([1, 1, 1], -3), ([0, 0, 3], 3)], 3);
        assert_eq!(m.map.components()[0], want);
    }

    #[test]
    fn ueda_square_map() {
        let phi = RatMapP1::power(Q::from_i64(1), 2).unwrap();
        let m = make_ueda(&phi).unwrap();
        let c = m.map.components();
        assert_eq!(c[0], poly(&[([2, 0, 0], 1)], 2));
        assert_eq!(c[1], poly(&[([0, 2, 0], 1), ([1, 0, 1], -2)], 2));
        assert_eq!(c[2], poly(&[([0, 0, 2], 1)], 2));
    }

    #[test]
    fn ueda_round_trip_identity() {
        // f(π(a, b)) = π(φ(a), φ(b)) for a degree-3 φ at rational points.
        let phi = RatMapP1::from_affine(
            &[Q::from_i64(1), Q::from_i64(0), Q::from_i64(-2), Q::from_i64(1)],
            &[Q::from_i64(3), Q::from_i64(1)],
        )
        .unwrap();
        let f = ueda_map(&phi).unwrap();
        let pi = |a: &[Q; 2], b: &[Q; 2]| {
            [a[0].clone() * b[0].clone(), a[0].clone() * b[1].clone() + a[1].clone() * b[0].clone(), a[1].clone() * b[1].clone()]
        };
        for (x, y) in [(2, 5), (-1, 3), (7, -4)] {
            let a = [Q::from_i64(1), Q::from_i64(x)];
            let b = [Q::from_i64(1), Q::from_i64(y)];
            let lhs = ProjPoint::from_array(f.apply_coords(&pi(&a, &b))).unwrap();
            let rhs = ProjPoint::from_array(pi(&phi.apply_coords(&a), &phi.apply_coords(&b))).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn pencil_rejects_base_points_and_finds_lift() {
        let bad = make_pencil(
            poly(&[([2, 0, 0], 1)], 2),
            poly(&[([2, 0, 0], 1)], 2),
            poly(&[([0, 0, 2], 1)], 2),
        );
        assert!(matches!(bad, Err(Error::CommonZero)));
        let m = make_pencil(
            poly(&[([2, 0, 0], 1)], 2),
            poly(&[([0, 2, 0], 1), ([1, 1, 0], 1)], 2),
            poly(&[([0, 0, 2], 1), ([1, 1, 0], 1)], 2),
        )
        .unwrap();
        let Lift::Rational(phi) = &m.lifts[0] else { panic!() };
        // φ(a) = a² + a on the parameter y/x.
        let want = RatMapP1::polynomial(&[Q::from_i64(0), Q::from_i64(1), Q::from_i64(1)]).unwrap();
        assert_eq!(phi.apply(&crate::polyalg::P1Point::affine(Q::from_i64(3))), want.apply(&crate::polyalg::P1Point::affine(Q::from_i64(3))));
    }

    #[test]
    fn two_lines_lifts_are_p_and_q() {
        let p = [Q::from_i64(-1), Q::from_i64(0), Q::from_i64(1)];
        let q = [Q::from_i64(0), Q::from_i64(1), Q::from_i64(1)];
        let m = make_two_lines(&p, &q).unwrap();
        for (lift, coeffs) in m.lifts.iter().zip([&p, &q]) {
            let Lift::Rational(phi) = lift else { panic!() };
            let a = crate::polyalg::P1Point::affine(Q::from_i64(5));
            let want = RatMapP1::polynomial(coeffs).unwrap().apply(&a);
            assert_eq!(phi.apply(&a), want);
        }
        let uneven = make_two_lines(&p, &[Q::from_i64(1), Q::from_i64(1), Q::from_i64(0), Q::from_i64(2)]);
        assert!(matches!(uneven, Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn conic_line_equals_ueda_of_power() {
        let m = make_conic_line(Q::from_i64(1), 2, Orientation::Plus).unwrap();
        let u = make_ueda(&RatMapP1::power(Q::from_i64(1), 2).unwrap()).unwrap();
        assert_eq!(m.map, u.map);
        assert_eq!(m.web.components().len(), 2);
        assert_eq!(m.lifts.len(), 2);
    }

    #[test]
    fn degree_one_inputs_are_rejected() {
        assert!(matches!(make_nodal::<Q>(1, Orientation::Plus), Err(Error::InvalidDegree(_))));
        assert!(matches!(make_three_lines::<Q>(1), Err(Error::InvalidDegree(_))));
        let id = RatMapP1::power(Q::from_i64(1), 1).unwrap();
        assert!(matches!(make_ueda(&id), Err(Error::InvalidDegree(_))));
    }

    #[test]
    fn descriptor_serde_round_trip() {
        let m = make_conic_line(Q::new(3.into(), 2.into()), 3, Orientation::Minus).unwrap();
        let s = serde_json::to_string(&m.descriptor).unwrap();
        let back: FamilyDescriptor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m.descriptor);
        assert_eq!(back.expected_splits, vec![[4, 2], [4, 2]]);
    }

    #[test]
    fn smooth_cubic_leaves_are_concurrent() {
        let f = make_smooth_cubic(Lattice::square(), 2, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let p = ProjPoint::new(C64::sample(&mut rng), C64::sample(&mut rng), C64::sample(&mut rng)).unwrap();
            worst = worst.max(f.evaluate(&p).unwrap().spread);
        }
        assert!(worst < 1e-6, "spread {worst}");
    }
}
