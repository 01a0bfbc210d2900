//! Machine-readable outputs. Every JSON file is written by [`write_json`]
//! from the main thread, after any parallel work has been collected.

use std::io::Write;
use std::path::Path;

use loggp::energy::EnergyReport;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// How a check compares its metric with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">")]
    Above,
    #[serde(rename = ">=")]
    AtLeast,
}

impl Relation {
    pub fn holds(self, metric: f64, tolerance: f64) -> bool {
        match self {
            Self::Below => metric < tolerance,
            Self::AtMost => metric <= tolerance,
            Self::Above => metric > tolerance,
            Self::AtLeast => metric >= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Acceptance criterion number, absent for module invariants.
    pub criterion: Option<u8>,
    /// The statement being checked.
    pub claim: String,
    pub metric: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub passed: bool,
    /// Set when the computation behind the metric failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Metric reported when the computation behind a check fails.
pub const FAILED_METRIC: f64 = f64::MAX;

impl Check {
    pub fn new(name: &str, criterion: Option<u8>, claim: &str, metric: f64, relation: Relation, tolerance: f64) -> Self {
        let passed = metric.is_finite() && relation.holds(metric, tolerance);
        Self {
            name: name.into(),
            criterion,
            claim: claim.into(),
            // JSON has no NaN or infinity
            metric: if metric.is_finite() { metric } else { FAILED_METRIC },
            relation,
            tolerance,
            passed,
            error: None,
        }
    }

    pub fn failed(name: &str, criterion: Option<u8>, claim: &str, relation: Relation, tolerance: f64, err: impl ToString) -> Self {
        Self {
            name: name.into(),
            criterion,
            claim: claim.into(),
            metric: FAILED_METRIC,
            relation,
            tolerance,
            passed: false,
            error: Some(err.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub tier: String,
    pub profile_length: f64,
    pub profile_n: usize,
    pub evolution_n: usize,
    pub dt: f64,
    pub lambda: f64,
    pub c_grid: Vec<f64>,
    pub fuzz_pairs: usize,
    pub galerkin_orders: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub mutate: Option<String>,
    pub environment: Environment,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

impl VerificationReport {
    pub fn failing(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub lambda: f64,
    pub c: f64,
    pub theta0: f64,
    pub length: f64,
    pub n: usize,
    /// Minimum modulus from the root finder, `null` for the black soliton.
    pub y0: Option<f64>,
    pub min_modulus: f64,
    pub stationary_residual: f64,
    pub energy: EnergyReport,
    pub phase_winding: f64,
    pub csv: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalerkinSummary {
    pub m: usize,
    pub gradient_series: Vec<f64>,
    pub gradient_bound: f64,
    pub gradient_bound_holds: bool,
    pub perturbation_series: Vec<f64>,
    pub stiffness_min_singular: f64,
    pub holder_constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryReport {
    pub scheme: String,
    pub lambda: f64,
    pub c: f64,
    pub nonlinearity: String,
    pub eps: f64,
    pub boundary: String,
    pub length: f64,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub steps: usize,
    /// `k_max^2 dt / pi`; above about one the splitting can resonate.
    pub resonance_number: Option<f64>,
    pub times: Vec<f64>,
    pub energy_series: Vec<EnergyReport>,
    pub mass_defect_series: Vec<f64>,
    pub l2_series: Vec<f64>,
    pub energy_drift: f64,
    /// `L^2` distance between the final state and the datum.
    pub deviation: f64,
    /// `L^2` distance between the final state and the translated datum, for wave data.
    pub translate_error: Option<f64>,
    pub galerkin: Option<GalerkinSummary>,
    pub final_csv: String,
    pub snapshots: Vec<String>,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    write_bytes(path, to_json(value).as_bytes())
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let mut file = std::fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    file.write_all(bytes).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Relation::Below.holds(1.0, 2.0));
        assert!(!Relation::Below.holds(2.0, 2.0));
        assert!(Relation::AtMost.holds(2.0, 2.0));
        assert!(Relation::Above.holds(1e-300, 0.0));
        assert!(Relation::AtLeast.holds(3.5, 3.5));
    }

    #[test]
    fn non_finite_metric_fails() {
        let c = Check::new("x", None, "y", f64::NAN, Relation::Below, 1.0);
        assert!(!c.passed);
        assert_eq!(c.metric, FAILED_METRIC);
        assert!(to_json(&c).contains("\"<\""));
    }
}
