//! Verification reports with a stable JSON schema.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::field::{Field, Regime};

/// Residual recorded for a case that could not be evaluated.
pub const FAILED_RESIDUAL: f64 = f64::MAX;

/// Shared settings of a verification run.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub family: String,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub iterations: usize,
}

impl CheckConfig {
    pub fn new(family: impl Into<String>) -> Self {
        Self { family: family.into(), seed: 0, samples: 1000, tol: 1e-8, iterations: 10 }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_iterations(mut self, n: usize) -> Self {
        self.iterations = n;
        self
    }

    /// Each check draws from its own stream so reports do not depend on
    /// the order in which checks run.
    pub fn rng(&self, check: &str) -> ChaCha8Rng {
        let salt = check.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x1000_0000_01b3));
        ChaCha8Rng::seed_from_u64(self.seed ^ salt)
    }

    /// Tolerance in force for a regime: exact checks demand exact vanishing.
    pub fn tol_for<K: Field>(&self) -> f64 {
        match K::REGIME {
            Regime::Exact => 0.0,
            Regime::Float => self.tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub residual: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub check: String,
    pub family: String,
    pub d: u32,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub max_residual: f64,
    pub pass: bool,
    pub cases: Vec<Case>,
}

impl VerificationReport {
    pub fn new(check: &str, cfg: &CheckConfig, d: u32, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            family: cfg.family.clone(),
            d,
            seed: cfg.seed,
            samples: 0,
            tolerance,
            max_residual: 0.0,
            pass: true,
            cases: Vec::new(),
        }
    }

    /// Adds a case judged against the report tolerance.
    pub fn measure(&mut self, name: impl Into<String>, residual: f64, detail: Option<String>) {
        let pass = residual <= self.tolerance;
        self.push(Case { name: name.into(), residual, pass, detail });
    }

    /// Adds a case with its own verdict; the residual still counts toward
    /// the maximum.
    pub fn push(&mut self, case: Case) {
        self.max_residual = self.max_residual.max(case.residual);
        self.cases.push(case);
        self.refresh();
    }

    /// A case that failed to evaluate.
    pub fn failure(&mut self, name: impl Into<String>, detail: String) {
        self.push(Case { name: name.into(), residual: FAILED_RESIDUAL, pass: false, detail: Some(detail) });
    }

    /// A case that holds or fails without a residual.
    pub fn verdict(&mut self, name: impl Into<String>, pass: bool, detail: Option<String>) {
        self.push(Case { name: name.into(), residual: 0.0, pass, detail });
    }

    fn refresh(&mut self) {
        self.pass = self.max_residual <= self.tolerance && self.cases.iter().all(|c| c.pass);
    }

    /// One console line, e.g. `invariance: PASS (max residual 1.2e-12, 1000 samples)`.
    pub fn summary(&self) -> String {
        format!(
            "{}: {} (max residual {:.3e}, {} samples)",
            self.check,
            if self.pass { "PASS" } else { "FAIL" },
            self.max_residual,
            self.samples
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{C64, Q};

    #[test]
    fn pass_flag_tracks_cases_and_residual() {
        let cfg = CheckConfig::new("nodal");
        let mut r = VerificationReport::new("demo", &cfg, 2, 1e-8);
        r.measure("a", 1e-10, None);
        assert!(r.pass);
        r.verdict("b", false, Some("broken".into()));
        assert!(!r.pass);
        let mut s = VerificationReport::new("demo", &cfg, 2, 1e-8);
        s.measure("c", 1e-3, None);
        assert!(!s.pass);
    }

    #[test]
    fn schema_field_names() {
        let cfg = CheckConfig::new("conic").with_seed(7);
        let mut r = VerificationReport::new("invariance", &cfg, 2, 0.0);
        r.failure("x", "no image".into());
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["check", "family", "d", "seed", "samples", "tolerance", "maxResidual", "pass", "cases"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let back: VerificationReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn exact_regime_has_zero_tolerance() {
        let cfg = CheckConfig::new("x").with_tol(1e-5);
        assert_eq!(cfg.tol_for::<Q>(), 0.0);
        assert_eq!(cfg.tol_for::<C64>(), 1e-5);
    }
}
