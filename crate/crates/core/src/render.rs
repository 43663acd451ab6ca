//! SVG figures of real web leaves.
//!
//! Leaves are the real lines `𝒟c` for `c` sampled uniformly along the real
//! cycle of each component's parameter: the angle of `[cos θ : sin θ]` on
//! `RP¹`, or the real period of a lattice. A projective `view` maps plane
//! coordinates to screen coordinates before clipping to the viewport.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::curves::{ComponentParam, WebSpec};
use crate::families::FamilyTag;
use crate::polyalg::P1Point;
use crate::projgeom::ProjPoint;
use crate::{Error, Result, C64};

/// Largest imaginary part, relative to the coordinate norm, of a leaf
/// accepted as real.
pub const REAL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Viewport {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        let v = Self { x0, y0, x1, y1 };
        if ![x0, y0, x1, y1].iter().all(|t| t.is_finite()) || x1 <= x0 || y1 <= y0 {
            return Err(Error::InvalidArgument(format!("degenerate viewport {x0},{y0},{x1},{y1}")));
        }
        Ok(v)
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    fn contains(&self, p: [f64; 2], slack: f64) -> bool {
        p[0] >= self.x0 - slack && p[0] <= self.x1 + slack && p[1] >= self.y0 - slack && p[1] <= self.y1 + slack
    }
}

impl std::str::FromStr for Viewport {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("viewport must be X0,Y0,X1,Y1: {s:?}")))?;
        match v.as_slice() {
            [x0, y0, x1, y1] => Viewport::new(*x0, *y0, *x1, *y1),
            _ => Err(Error::Parse(format!("viewport must be X0,Y0,X1,Y1: {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Style {
    pub stroke: String,
    pub stroke_width: f64,
    pub background: Option<String>,
    /// Width of the image in pixels; the height follows the viewport.
    pub pixels: u32,
}

impl Default for Style {
    fn default() -> Self {
        Self { stroke: "#1f3b73".into(), stroke_width: 0.8, background: Some("#ffffff".into()), pixels: 600 }
    }
}

/// What to draw. `view` rows give the homogeneous screen coordinates
/// `[X : Y : W]` as linear forms in `[x : y : z]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RenderSpec {
    pub family: FamilyTag,
    pub leaves: usize,
    pub viewport: Viewport,
    pub view: [[f64; 3]; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<[f64; 2]>,
    pub style: Style,
}

/// `X = (x − z)/(x + z)`, `Y = y/(x + z)`: the envelope `y² = 4xz` of the
/// conic web becomes the unit circle.
pub const CONIC_VIEW: [[f64; 3]; 3] = [[1.0, 0.0, -1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 1.0]];
pub const AFFINE_VIEW: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

impl RenderSpec {
    /// Family defaults: the circle view for the conic, the chart `z = 1`
    /// otherwise.
    pub fn new(family: FamilyTag, leaves: usize) -> Self {
        let (view, r) = match family {
            FamilyTag::Conic => (CONIC_VIEW, 1.6),
            _ => (AFFINE_VIEW, 3.0),
        };
        Self {
            family,
            leaves,
            viewport: Viewport { x0: -r, y0: -r, x1: r, y1: r },
            view,
            tau: (family == FamilyTag::SmoothCubic).then_some([0.0, 1.0]),
            style: Style::default(),
        }
    }

    pub fn with_viewport(mut self, v: Viewport) -> Self {
        self.viewport = v;
        self
    }

    pub fn with_view(mut self, view: [[f64; 3]; 3]) -> Self {
        self.view = view;
        self
    }

    pub fn with_tau(mut self, tau: [f64; 2]) -> Self {
        self.tau = Some(tau);
        self
    }

    pub fn with_style(mut self, style: Style) -> Self {
        self.style = style;
        self
    }

    fn web(&self) -> Result<WebSpec<C64>> {
        match self.family {
            FamilyTag::SmoothCubic => {
                let [re, im] = self.tau.unwrap_or([0.0, 1.0]);
                Ok(crate::elliptic::Lattice::new(C64::new(re, im))?.web())
            }
            f => crate::families::rational_web(f),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.leaves == 0 {
            return Err(Error::InvalidArgument("at least one leaf is required".into()));
        }
        Viewport::new(self.viewport.x0, self.viewport.y0, self.viewport.x1, self.viewport.y1)?;
        if !(self.style.stroke_width > 0.0) || self.style.pixels == 0 {
            return Err(Error::InvalidArgument("stroke width and pixel size must be positive".into()));
        }
        Ok(())
    }
}

/// One drawn leaf.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderedLeaf {
    pub component: usize,
    /// The leaf in plane coordinates, `l · [x, y, z] = 0`.
    pub line: [f64; 3],
    /// Screen endpoints after clipping.
    pub segment: [[f64; 2]; 2],
}

#[derive(Clone, Debug)]
pub struct Rendering {
    pub svg: String,
    pub leaves: Vec<RenderedLeaf>,
    /// Sampled leaves that miss the viewport.
    pub skipped: usize,
}

impl Rendering {
    pub fn write(&self, path: &Path) -> Result<()> {
        crate::io::write_atomic(path, self.svg.as_bytes())
    }
}

/// Real leaf of the parameter `θ` (rational components) or `s ∈ [0, 1)`
/// along the real period (elliptic components).
fn real_leaf(param: &ComponentParam<C64>, t: f64) -> Result<[f64; 3]> {
    let c: ProjPoint<C64> = match param {
        ComponentParam::Rational(p) => {
            let a = P1Point::new(C64::new(t.cos(), 0.0), C64::new(t.sin(), 0.0))?;
            p.eval(&a)?
        }
        ComponentParam::Elliptic(l) => l.embed(&l.from_coordinates(t, 0.0)),
    };
    let u = c.unit_c64();
    let k = (0..3).max_by(|&i, &j| u[i].norm().partial_cmp(&u[j].norm()).unwrap()).unwrap();
    let phase = u[k] / u[k].norm();
    let v = u.map(|z| z / phase);
    if v.iter().any(|z| z.im.abs() > REAL_TOL) {
        return Err(Error::InvalidArgument("component has no real leaves along its real cycle".into()));
    }
    Ok(v.map(|z| z.re))
}

/// Chord of `a X + b Y + c = 0` inside the viewport, if any.
fn clip(line: [f64; 3], v: &Viewport) -> Option<[[f64; 2]; 2]> {
    let [a, b, c] = line;
    let scale = a.abs().max(b.abs());
    if scale <= 1e-12 * c.abs().max(1.0) {
        return None;
    }
    let slack = 1e-12 * v.width().max(v.height());
    let mut pts: Vec<[f64; 2]> = Vec::new();
    if b.abs() > 1e-15 * scale {
        for x in [v.x0, v.x1] {
            pts.push([x, -(a * x + c) / b]);
        }
    }
    if a.abs() > 1e-15 * scale {
        for y in [v.y0, v.y1] {
            pts.push([-(b * y + c) / a, y]);
        }
    }
    pts.retain(|p| v.contains(*p, slack));
    let mut best: Option<([[f64; 2]; 2], f64)> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = (pts[i][0] - pts[j][0]).hypot(pts[i][1] - pts[j][1]);
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some(([pts[i], pts[j]], d));
            }
        }
    }
    best.filter(|(_, d)| *d > slack).map(|(s, _)| s)
}

/// Samples, projects and clips the leaves, then writes the SVG.
pub fn render(spec: &RenderSpec) -> Result<Rendering> {
    spec.validate()?;
    let view = Matrix3::from_row_slice(&spec.view.concat());
    let inv = view
        .try_inverse()
        .filter(|m| m.iter().all(|x| x.is_finite()))
        .ok_or_else(|| Error::InvalidArgument("view matrix is singular".into()))?;
    let web = spec.web()?;
    let comps = web.components();
    let mut leaves = Vec::new();
    let mut skipped = 0;
    for (ci, comp) in comps.iter().enumerate() {
        // leaves are dealt to components round robin
        let n = (spec.leaves + comps.len() - 1 - ci) / comps.len();
        for k in 0..n {
            let s = (k as f64 + 0.5) / n as f64;
            let t = match comp.param {
                ComponentParam::Rational(_) => std::f64::consts::PI * s,
                ComponentParam::Elliptic(_) => s,
            };
            let line = real_leaf(&comp.param, t)?;
            // a line l·p = 0 reads (V⁻ᵀ l)·s = 0 on screen
            let screen = inv.transpose() * Vector3::from(line);
            match clip([screen[0], screen[1], screen[2]], &spec.viewport) {
                Some(segment) => leaves.push(RenderedLeaf { component: ci, line, segment }),
                None => skipped += 1,
            }
        }
    }
    let svg = svg_document(spec, &leaves);
    Ok(Rendering { svg, leaves, skipped })
}

fn svg_document(spec: &RenderSpec, leaves: &[RenderedLeaf]) -> String {
    let v = &spec.viewport;
    let st = &spec.style;
    let height = ((st.pixels as f64) * v.height() / v.width()).round().max(1.0) as u32;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        st.pixels,
        height,
        v.x0,
        -v.y1,
        v.width(),
        v.height()
    );
    let _ = writeln!(s, "<title>{} web, {} leaves</title>", spec.family, leaves.len());
    if let Some(bg) = &st.background {
        let _ = writeln!(s, r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#, v.x0, -v.y1, v.width(), v.height(), bg);
    }
    let _ = writeln!(
        s,
        r#"<g transform="scale(1,-1)" stroke="{}" stroke-width="{}" vector-effect="non-scaling-stroke" fill="none">"#,
        st.stroke, st.stroke_width
    );
    for l in leaves {
        let [[x1, y1], [x2, y2]] = l.segment;
        let _ = writeln!(
            s,
            r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" vector-effect="non-scaling-stroke" data-component="{}"/>"#,
            l.component
        );
    }
    s.push_str("</g>\n</svg>\n");
    s
}
