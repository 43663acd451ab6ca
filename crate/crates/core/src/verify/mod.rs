//! Executable checks of the structural identities of web-preserving maps.

pub mod dynamics;
pub mod invariance;
pub mod ramification;
pub mod report;
pub mod suite;

pub use dynamics::{check_crit_finite, check_sing_totinv, check_totally_invariant, totally_invariant_points};
pub use invariance::{
    check_invariance, check_pushforward, curve_residual, image_line, induced_map_on_c, pushforward_degree, ImageLine,
    InducedImage,
};
pub use ramification::{
    check_ramification, check_sectional_identity, ramification_split, web_dual_curve, ComponentSplit, RamificationSplit,
};
pub use report::{Case, CheckConfig, VerificationReport};
pub use suite::{run_checks, CheckName};
