//! Losses of the form `W(a − S)` and risks of `V` and `V*`.
//!
//! Exact risks exist for squared error only ([`exact`]). Any loss can be
//! estimated by seeded Monte Carlo ([`monte_carlo`]), and [`dominance`]
//! checks pointwise that `V*` never loses to `V`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::distributions::FamilyKind;
use crate::error::{Error, Result};
use crate::estimators::ThresholdRule;

pub mod dominance;
pub mod exact;
pub mod monte_carlo;
pub mod truncation;

pub use dominance::{dominance_scan, ScanDomain, ScanReport};
pub use exact::{
    exact_component_risk_v, exact_report, exact_risk_v, exact_risk_v_star, improvement_exact,
};
pub use monte_carlo::{mc_prediction_risk, mc_risk};
pub use truncation::{truncation_risk, TruncationRisk};

/// Thresholds used by the property suites: the boundary case, integers, and
/// a non-integer.
pub const THRESHOLD_GRID: [f64; 5] = [0.0, 1.0, 2.5, 3.0, 9.0];

/// Parameter values used by the property suites for a family and rule.
///
/// The Poisson grid includes `θ = m` so that the boundary point carries
/// substantial mass.
pub fn theta_grid(kind: FamilyKind, rule: &ThresholdRule) -> Vec<f64> {
    match kind {
        FamilyKind::Poisson => {
            let mut grid = vec![0.5, 1.0, 2.0, rule.boundary() as f64, 5.0, 10.0];
            grid.sort_by(f64::total_cmp);
            grid.dedup();
            grid
        }
        FamilyKind::Geometric => vec![0.1, 0.5, 0.9],
        FamilyKind::Exponential => vec![0.5, 1.0, 3.0],
        FamilyKind::UniformScale => vec![0.5, 2.0, 10.0],
    }
}

type LossFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A loss `W(a − S)` with `W(0) = 0` and `W(t) > 0` for every `t ≠ 0`.
#[derive(Clone)]
pub enum LossSpec {
    Squared,
    Absolute,
    Custom { name: String, w: LossFn },
}

impl LossSpec {
    /// Wraps a user-supplied `W`, checking `W(0) = 0` and `W(t) > 0` on a
    /// symmetric grid of `t ≠ 0`.
    pub fn custom<F>(name: impl Into<String>, w: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if w(0.0) != 0.0 {
            return Err(Error::InvalidParameter(format!("W(0) must be 0, got {}", w(0.0))));
        }
        const PROBES: [f64; 12] = [1e-6, 1e-3, 0.01, 0.1, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0, 100.0, 1e4];
        for t in PROBES.iter().flat_map(|&t| [t, -t]) {
            let value = w(t);
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "W(t) must be positive and finite for t ≠ 0, got W({t}) = {value}"
                )));
            }
        }
        Ok(LossSpec::Custom { name: name.into(), w: Arc::new(w) })
    }

    pub fn name(&self) -> &str {
        match self {
            LossSpec::Squared => "squared",
            LossSpec::Absolute => "absolute",
            LossSpec::Custom { name, .. } => name,
        }
    }

    /// `W(action − s)`.
    #[inline]
    pub fn value(&self, action: f64, s: f64) -> f64 {
        let t = action - s;
        match self {
            LossSpec::Squared => t * t,
            LossSpec::Absolute => t.abs(),
            LossSpec::Custom { w, .. } => w(t),
        }
    }
}

impl fmt::Debug for LossSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("LossSpec").field(&self.name()).finish()
    }
}

/// `W(action − s)`.
pub fn loss_value(loss: &LossSpec, action: f64, s: f64) -> f64 {
    loss.value(action, s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    MonteCarlo,
}

/// What the estimators are scored against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// `S = Σ U(X_j) θ_j`.
    Estimand,
    /// `S* = Σ Y_j U(X_j)` with `Y_j` an unobserved independent copy of `X_j`.
    Prediction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StdErrors {
    pub risk_v: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub risk_v_star: Option<f64>,
    /// Standard error of the paired difference `loss(V) − loss(V*)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub improvement: Option<f64>,
}

/// Unbiasedness and pathwise checks gathered during a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McDiagnostics {
    pub mean_v: f64,
    pub mean_target: f64,
    /// Mean of `V − target` over replicates.
    pub mean_bias: f64,
    pub se_bias: f64,
    /// Largest `loss(V*) − loss(V)` seen; never positive.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_paired_loss_difference: Option<f64>,
}

/// Risks of `V` and (for the at-most rule) `V*`, exact or simulated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskReport {
    pub method: Method,
    pub target: Target,
    pub loss: String,
    pub risk_v: f64,
    pub risk_v_star: Option<f64>,
    pub improvement: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<StdErrors>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<McDiagnostics>,
}
