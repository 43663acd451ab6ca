//! Holomorphic selfmaps of the projective plane preserving algebraic webs:
//! constructions of the classified families and executable checks of their
//! structural identities.

pub mod curves;
pub mod elliptic;
pub mod error;
pub mod families;
pub mod field;
pub mod io;
pub mod linalg;
pub mod polyalg;
pub mod projgeom;
pub mod render;
pub mod verify;

pub use error::{Error, IndeterminacyKind, Result};
pub use field::{Field, Regime, Scalar, C64, Q};
pub use projgeom::{collinear, join, meet, ProjLine, ProjPoint, DEFAULT_TOL};
