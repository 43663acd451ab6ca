//! Versioned JSON artifacts: map files and curve files.
//!
//! Exact coefficients are stored as "n/d" strings and floating coefficients
//! as `[re, im]` pairs, so the exact regime round-trips bit for bit.

use std::fs;
use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::curves::{ComponentParam, CurveFamily, DualCurve, RationalParam, WebComponent, WebSpec};
use crate::elliptic::Lattice;
use crate::families::FamilyDescriptor;
use crate::polyalg::{BinForm, EndoP2, Exponent, HomPoly3, P1Point};
use crate::projgeom::ProjPoint;
use crate::{Error, Field, Regime, Result, C64};

pub const MAP_FORMAT: &str = "webendo-map";
pub const CURVE_FORMAT: &str = "webendo-curve";
pub const FORMAT_VERSION: u32 = 1;

/// One coefficient in the file's regime.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffRecord {
    Exact(String),
    Float([f64; 2]),
}

impl CoeffRecord {
    pub fn from_field<K: Field>(c: &K) -> Self {
        match K::REGIME {
            Regime::Exact => CoeffRecord::Exact(c.to_text()),
            Regime::Float => {
                let z = c.to_c64();
                CoeffRecord::Float([z.re, z.im])
            }
        }
    }

    pub fn regime(&self) -> Regime {
        match self {
            CoeffRecord::Exact(_) => Regime::Exact,
            CoeffRecord::Float(_) => Regime::Float,
        }
    }

    /// Exact records convert to either regime; float records only to `C64`.
    pub fn to_field<K: Field>(&self) -> Result<K> {
        match self {
            CoeffRecord::Exact(s) => {
                let q = crate::Q::parse_text(s)?;
                Ok(K::from_rational(&q))
            }
            CoeffRecord::Float([re, im]) => {
                if !re.is_finite() || !im.is_finite() {
                    return Err(Error::NonFinite);
                }
                K::from_c64(C64::new(*re, *im)).ok_or(Error::RegimeMismatch)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exp: Exponent,
    pub coeff: CoeffRecord,
}

/// A homogeneous polynomial as its nonzero terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub degree: u32,
    pub terms: Vec<TermRecord>,
}

impl PolyRecord {
    pub fn from_poly<K: Field>(f: &HomPoly3<K>) -> Self {
        let terms = f
            .terms()
            .filter(|(_, c)| !c.is_negligible(0.0))
            .map(|(exp, c)| TermRecord { exp, coeff: CoeffRecord::from_field(c) })
            .collect();
        Self { degree: f.degree(), terms }
    }

    pub fn to_poly<K: Field>(&self) -> Result<HomPoly3<K>> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.exp, t.coeff.to_field::<K>()?)))
            .collect::<Result<Vec<_>>>()?;
        HomPoly3::from_terms(self.degree, &terms)
    }

    fn regimes(&self) -> impl Iterator<Item = Regime> + '_ {
        self.terms.iter().map(|t| t.coeff.regime())
    }
}

fn point_record<K: Field>(p: &[K]) -> Vec<CoeffRecord> {
    p.iter().map(CoeffRecord::from_field).collect()
}

fn parse_coords<K: Field, const N: usize>(v: &[CoeffRecord]) -> Result<[K; N]> {
    if v.len() != N {
        return Err(Error::Parse(format!("expected {N} coordinates, found {}", v.len())));
    }
    let parsed = v.iter().map(|c| c.to_field::<K>()).collect::<Result<Vec<_>>>()?;
    parsed.try_into().map_err(|_| Error::Parse("coordinate count".into()))
}

fn check_header(format: &str, version: u32, expected: &str) -> Result<()> {
    if format != expected {
        return Err(Error::Parse(format!("expected format {expected:?}, found {format:?}")));
    }
    if version != FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported {expected} version {version}")));
    }
    Ok(())
}

fn check_regime(declared: Regime, found: impl IntoIterator<Item = Regime>) -> Result<()> {
    if found.into_iter().any(|r| r != declared) {
        return Err(Error::Parse(format!("coefficients do not match declared regime {declared}")));
    }
    Ok(())
}

/// A selfmap of P² on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapFile {
    pub format: String,
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<FamilyDescriptor>,
    pub regime: Regime,
    pub degree: u32,
    pub components: [PolyRecord; 3],
}

impl MapFile {
    pub fn new<K: Field>(map: &EndoP2<K>, descriptor: Option<FamilyDescriptor>) -> Self {
        let [a, b, c] = map.components();
        Self {
            format: MAP_FORMAT.into(),
            version: FORMAT_VERSION,
            descriptor,
            regime: K::REGIME,
            degree: map.degree(),
            components: [PolyRecord::from_poly(a), PolyRecord::from_poly(b), PolyRecord::from_poly(c)],
        }
    }

    fn validate(&self) -> Result<()> {
        check_header(&self.format, self.version, MAP_FORMAT)?;
        check_regime(self.regime, self.components.iter().flat_map(|c| c.regimes()))?;
        if self.components.iter().any(|c| c.degree != self.degree) {
            return Err(Error::DegreeMismatch(format!("components must have degree {}", self.degree)));
        }
        Ok(())
    }

    /// Reads the map in regime `K`. Exact files may be read as `C64`.
    pub fn to_endo<K: Field>(&self) -> Result<EndoP2<K>> {
        self.validate()?;
        if self.regime == Regime::Float && K::REGIME == Regime::Exact {
            return Err(Error::RegimeMismatch);
        }
        let [a, b, c] = &self.components;
        EndoP2::new([a.to_poly()?, b.to_poly()?, c.to_poly()?])
    }

    pub fn read(path: &Path) -> Result<Self> {
        let m: Self = read_json(path)?;
        m.validate()?;
        Ok(m)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json_atomic(path, self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ParamRecord {
    /// Binary forms, coefficient `i` multiplying `a0^(n-i) a1^i`.
    pub components: [Vec<CoeffRecord>; 3],
    pub special: Vec<Vec<CoeffRecord>>,
}

/// One irreducible component of a curve in the dual plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentRecord {
    pub family: CurveFamily,
    pub equation: PolyRecord,
    pub singular: Vec<Vec<CoeffRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameterization: Option<ParamRecord>,
    /// Lattice parameter of a smooth cubic in Weierstrass form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<[f64; 2]>,
}

impl ComponentRecord {
    pub fn from_curve<K: Field>(curve: &DualCurve<K>) -> Self {
        Self {
            family: curve.family().clone(),
            equation: PolyRecord::from_poly(curve.equation()),
            singular: curve.singular_points().iter().map(|p| point_record(p.coords())).collect(),
            parameterization: None,
            tau: None,
        }
    }

    pub fn with_param<K: Field>(mut self, param: &RationalParam<K>) -> Self {
        let comps = param.components();
        self.parameterization = Some(ParamRecord {
            components: [0, 1, 2].map(|i| point_record(comps[i].coeffs())),
            special: param.special_parameters().iter().map(|a| point_record(a.coords())).collect(),
        });
        self
    }

    pub fn with_lattice(mut self, lattice: &Lattice) -> Self {
        let t = lattice.tau();
        self.tau = Some([t.re, t.im]);
        self
    }

    fn from_component<K: Field>(comp: &WebComponent<K>) -> Self {
        let r = Self::from_curve(&comp.curve);
        match &comp.param {
            ComponentParam::Rational(p) => r.with_param(p),
            ComponentParam::Elliptic(l) => r.with_lattice(l),
        }
    }

    fn regimes(&self) -> Vec<Regime> {
        let mut out: Vec<Regime> = self.equation.regimes().collect();
        out.extend(self.singular.iter().flatten().map(|c| c.regime()));
        if let Some(p) = &self.parameterization {
            out.extend(p.components.iter().flatten().map(|c| c.regime()));
            out.extend(p.special.iter().flatten().map(|c| c.regime()));
        }
        out
    }

    pub fn to_curve<K: Field>(&self) -> Result<DualCurve<K>> {
        let singular = self
            .singular
            .iter()
            .map(|p| ProjPoint::from_array(parse_coords::<K, 3>(p)?))
            .collect::<Result<Vec<_>>>()?;
        DualCurve::new(self.equation.to_poly()?, self.family.clone(), singular)
    }

    pub fn to_param<K: Field>(&self) -> Result<Option<RationalParam<K>>> {
        let Some(p) = &self.parameterization else { return Ok(None) };
        let comps = p
            .components
            .iter()
            .map(|c| Ok(BinForm::from_coeffs(c.iter().map(|x| x.to_field::<K>()).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<Vec<_>>>()?;
        let comps: [BinForm<K>; 3] = comps.try_into().map_err(|_| Error::Parse("parameter arity".into()))?;
        let special = p
            .special
            .iter()
            .map(|a| {
                let [a0, a1] = parse_coords::<K, 2>(a)?;
                P1Point::new(a0, a1)
            })
            .collect::<Result<Vec<_>>>()?;
        RationalParam::new(comps, special).map(Some)
    }

    /// The component as part of a web; needs a parameterization or a lattice.
    pub fn to_web_component<K: Field>(&self) -> Result<WebComponent<K>> {
        let curve = self.to_curve::<K>()?;
        if let Some(param) = self.to_param::<K>()? {
            return Ok(WebComponent::rational(curve, param));
        }
        if let Some([re, im]) = self.tau {
            if K::REGIME == Regime::Exact {
                return Err(Error::NotRepresentable);
            }
            return Ok(WebComponent { curve, param: ComponentParam::Elliptic(Lattice::new(C64::new(re, im))?) });
        }
        Err(Error::InvalidArgument("component has neither a parameterization nor a lattice".into()))
    }
}

/// A curve in the dual plane, given by its irreducible components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveFile {
    pub format: String,
    pub version: u32,
    pub regime: Regime,
    pub degree: u32,
    pub components: Vec<ComponentRecord>,
    /// Relative residual of a numerically fitted equation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_residual: Option<f64>,
}

impl CurveFile {
    pub fn new<K: Field>(components: Vec<ComponentRecord>) -> Self {
        let degree = components.iter().map(|c| c.equation.degree).sum();
        Self {
            format: CURVE_FORMAT.into(),
            version: FORMAT_VERSION,
            regime: K::REGIME,
            degree,
            components,
            fit_residual: None,
        }
    }

    pub fn from_curve<K: Field>(curve: &DualCurve<K>) -> Self {
        Self::new::<K>(vec![ComponentRecord::from_curve(curve)])
    }

    pub fn from_web<K: Field>(web: &WebSpec<K>) -> Self {
        Self::new::<K>(web.components().iter().map(ComponentRecord::from_component).collect())
    }

    pub fn with_fit_residual(mut self, r: f64) -> Self {
        self.fit_residual = Some(r);
        self
    }

    fn validate(&self) -> Result<()> {
        check_header(&self.format, self.version, CURVE_FORMAT)?;
        if self.components.is_empty() {
            return Err(Error::Parse("curve file has no components".into()));
        }
        check_regime(self.regime, self.components.iter().flat_map(|c| c.regimes()))?;
        let sum: u32 = self.components.iter().map(|c| c.equation.degree).sum();
        if sum != self.degree {
            return Err(Error::DegreeMismatch(format!("components sum to degree {sum}, header says {}", self.degree)));
        }
        Ok(())
    }

    fn regime_allows<K: Field>(&self) -> Result<()> {
        if self.regime == Regime::Float && K::REGIME == Regime::Exact {
            return Err(Error::RegimeMismatch);
        }
        Ok(())
    }

    /// The reduced curve: the single component, or the union with
    /// intersections as singular points.
    pub fn to_curve<K: Field>(&self) -> Result<DualCurve<K>> {
        self.validate()?;
        self.regime_allows::<K>()?;
        if let [only] = self.components.as_slice() {
            return only.to_curve();
        }
        self.to_web::<K>().map(|w| w.curve().clone())
    }

    pub fn to_web<K: Field>(&self) -> Result<WebSpec<K>> {
        self.validate()?;
        self.regime_allows::<K>()?;
        WebSpec::new(self.components.iter().map(|c| c.to_web_component()).collect::<Result<Vec<_>>>()?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let c: Self = read_json(path)?;
        c.validate()?;
        Ok(c)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json_atomic(path, self)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty JSON with a trailing newline, written through a sibling temp file
/// and a rename so readers never observe a partial file.
pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("not a file path: {}", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}
