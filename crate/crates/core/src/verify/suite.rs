//! Running a selection of checks against one map and web.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curves::WebSpec;
use crate::families::{FamilyTag, Lift};
use crate::field::Field;
use crate::polyalg::EndoP2;
use crate::verify::dynamics::{check_crit_finite, check_sing_totinv, check_totally_invariant, no_split_report};
use crate::verify::invariance::{check_invariance, check_pushforward};
use crate::verify::ramification::{check_ramification, check_sectional_identity};
use crate::verify::report::{CheckConfig, VerificationReport};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    Invariance,
    Pushforward,
    Ramification,
    Sectional,
    CritFinite,
    SingTotinv,
    TotallyInvariant,
}

impl CheckName {
    pub const ALL: [CheckName; 7] = [
        CheckName::Invariance,
        CheckName::Pushforward,
        CheckName::Ramification,
        CheckName::Sectional,
        CheckName::CritFinite,
        CheckName::SingTotinv,
        CheckName::TotallyInvariant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckName::Invariance => "invariance",
            CheckName::Pushforward => "pushforward",
            CheckName::Ramification => "ramification",
            CheckName::Sectional => "sectional",
            CheckName::CritFinite => "crit-finite",
            CheckName::SingTotinv => "sing-totinv",
            CheckName::TotallyInvariant => "totally-invariant",
        }
    }

    /// Checks that use the lifts to the web components.
    pub fn needs_lifts(self) -> bool {
        !matches!(self, CheckName::Invariance | CheckName::Pushforward)
    }

    /// The default selection: everything when lifts are known, otherwise
    /// the checks that need only the map and the web. Critical finiteness
    /// holds for every member only of the nodal, smooth-cubic and
    /// three-lines families; elsewhere it depends on the lift and must be
    /// requested.
    pub fn applicable(have_lifts: bool, family: Option<FamilyTag>) -> Vec<CheckName> {
        let crit_finite = matches!(family, Some(FamilyTag::Nodal | FamilyTag::SmoothCubic | FamilyTag::ThreeLines));
        CheckName::ALL
            .into_iter()
            .filter(|c| have_lifts || !c.needs_lifts())
            .filter(|c| *c != CheckName::CritFinite || crit_finite)
            .collect()
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        CheckName::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown check {s:?}")))
    }
}

/// Runs `checks` in the given order. Checks needing lifts fail when
/// `lifts` is `None`; the ramification split is shared by the checks
/// that depend on it.
pub fn run_checks<K: Field>(
    map: &EndoP2<K>,
    web: &WebSpec<K>,
    lifts: Option<&[Lift<K>]>,
    expected: Option<&[[u32; 2]]>,
    cfg: &CheckConfig,
    checks: &[CheckName],
) -> Vec<VerificationReport> {
    let d = map.degree();
    let split = match lifts {
        Some(l) if checks.iter().any(|c| matches!(c, CheckName::Ramification | CheckName::Sectional | CheckName::CritFinite)) => {
            Some(check_ramification(map, web, l, expected, cfg))
        }
        _ => None,
    };
    let mut out = Vec::new();
    for &check in checks {
        if check.needs_lifts() && lifts.is_none() {
            let mut r = VerificationReport::new(check.name(), cfg, d, 0.0);
            r.failure("lifts", "no lift of the map to this web".into());
            out.push(r);
            continue;
        }
        let split_ref = split.as_ref().and_then(|(_, s)| s.as_ref());
        let report = match check {
            CheckName::Invariance => check_invariance(map, web, cfg),
            CheckName::Pushforward => check_pushforward(map, web, cfg),
            CheckName::Ramification => split.as_ref().map(|(r, _)| r.clone()).expect("computed above"),
            CheckName::Sectional => match split_ref {
                Some(s) => check_sectional_identity(map, web, s, cfg),
                None => no_split_report(check.name(), cfg, d),
            },
            CheckName::CritFinite => match split_ref {
                Some(s) => check_crit_finite(map, web, s, cfg),
                None => no_split_report(check.name(), cfg, d),
            },
            CheckName::SingTotinv => check_sing_totinv(map, web, lifts.unwrap_or(&[]), cfg),
            CheckName::TotallyInvariant => check_totally_invariant(lifts.unwrap_or(&[]), d, cfg),
        };
        out.push(report);
    }
    out
}
