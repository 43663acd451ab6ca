use thiserror::Error;

/// Which case of the indeterminacy locus of the secant map was hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndeterminacyKind {
    /// `a != b` but both parameters map to the same point of the curve.
    SamePointPair,
    /// `a == b` at a ramification point of the normalization.
    RamifiedDiagonal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("points coincide; no unique joining line")]
    CoincidentPoints,
    #[error("lines coincide; no unique meeting point")]
    CoincidentLines,
    #[error("all homogeneous coordinates vanish")]
    ZeroVector,
    #[error("value is not finite")]
    NonFinite,
    #[error("mixed exact and floating operands")]
    RegimeMismatch,
    #[error("form is identically zero")]
    ZeroForm,
    #[error("bihomogeneous form is not symmetric in its two arguments")]
    NotSymmetric,
    #[error("no curve of degree <= {0} vanishes on the samples")]
    NoCurveFound(u32),
    #[error("linear system is rank deficient: {0}")]
    RankDeficient(String),
    #[error("residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },
    #[error("tangent direction vanishes at this parameter")]
    DegenerateTangent,
    #[error("secant map is indeterminate here ({0:?})")]
    Indeterminate(IndeterminacyKind),
    #[error("every line of the pencil through the point is a leaf")]
    WholePencil,
    #[error("point lies on the lattice")]
    AtOrigin,
    #[error("embedded points are not pairwise distinct")]
    DegenerateTriple,
    #[error("components share a common zero")]
    CommonZero,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error("point is within {margin:e} of the critical curve (leaf separation {separation:e})")]
    NearCriticalPoint { separation: f64, margin: f64 },
    #[error("point is not on the curve (residual {0:e})")]
    NotOnCurve(f64),
    #[error("image of a web line is not a line (residual {0:e})")]
    InconsistentImage(f64),
    #[error("map restricted to the line is degenerate")]
    DegenerateRestriction,
    #[error("ramification split mismatch: {0}")]
    SplitMismatch(String),
    #[error("value cannot be represented in the exact regime")]
    NotRepresentable,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
