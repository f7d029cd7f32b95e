//! Threshold indicators, the per-family `V` statistics, and the improved `V*`.
//!
//! For the at-most rule `U(x) = 1{x ≤ A}` the unbiased per-observation
//! statistics are
//!
//! | family        | `V(x)`                                |
//! |---------------|---------------------------------------|
//! | Poisson       | `U(x − 1) · x`, i.e. `x` for `x ≤ m`  |
//! | Geometric     | `Σ_{i<x} U(i) = min(x, m)`            |
//! | Exponential   | `∫_0^x U(t) dt = min(x, A)`           |
//! | Uniform scale | `x U(x) + ∫_0^x U(t) dt`              |
//!
//! where `m = ⌊A⌋ + 1` is the first integer with `U = 0`. For the
//! greater-than rule only the Poisson statistic `x · 1{x ≥ m + 1}` exists.
//!
//! None of these functions look at `θ`; only [`estimand_s`] does.

use serde::{Deserialize, Serialize};

use crate::distributions::{FamilyKind, FamilyParam};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `U(x) = 1{x ≤ A}`.
    AtMost,
    /// `U(x) = 1{x > A}`.
    GreaterThan,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::AtMost => "at_most",
            Direction::GreaterThan => "greater_than",
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A threshold `A ≥ 0` and the side of it on which `U` fires.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdRule {
    #[serde(rename = "A")]
    threshold: f64,
    direction: Direction,
}

impl ThresholdRule {
    pub fn new(threshold: f64, direction: Direction) -> Result<Self> {
        if !(threshold.is_finite() && threshold >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "threshold must be finite and nonnegative, got {threshold}"
            )));
        }
        Ok(ThresholdRule { threshold, direction })
    }

    pub fn at_most(threshold: f64) -> Result<Self> {
        Self::new(threshold, Direction::AtMost)
    }

    pub fn greater_than(threshold: f64) -> Result<Self> {
        Self::new(threshold, Direction::GreaterThan)
    }

    #[inline]
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    #[inline]
    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Boundary index `m = ⌊A⌋ + 1`: the smallest integer strictly above `A`.
    #[inline]
    pub fn boundary(&self) -> u64 {
        self.threshold.floor() as u64 + 1
    }
}

/// Whether a `V` statistic exists for this pairing.
pub fn supports(kind: FamilyKind, direction: Direction) -> bool {
    direction == Direction::AtMost || kind == FamilyKind::Poisson
}

fn check_supported(kind: FamilyKind, rule: &ThresholdRule) -> Result<()> {
    if supports(kind, rule.direction) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "no V statistic for {kind} with direction {}",
            rule.direction
        )))
    }
}

fn check_at_most(rule: &ThresholdRule) -> Result<()> {
    match rule.direction {
        Direction::AtMost => Ok(()),
        Direction::GreaterThan => Err(Error::Unsupported(
            "the zero set and V* are defined for the at_most direction only".into(),
        )),
    }
}

/// Observed vector `X = (X_1, …, X_n)`, validated against a family's support.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBatch {
    values: Vec<f64>,
}

impl SampleBatch {
    pub fn new(kind: FamilyKind, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("sample must contain at least one value".into()));
        }
        for &x in &values {
            kind.check_support(x)?;
        }
        Ok(SampleBatch { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The indicator `U(x)` as `0.0` or `1.0`. The boundary `x = A` counts as
/// "at most".
#[inline]
pub fn u_value(rule: &ThresholdRule, x: f64) -> f64 {
    let fires = match rule.direction {
        Direction::AtMost => x <= rule.threshold,
        Direction::GreaterThan => x > rule.threshold,
    };
    if fires {
        1.0
    } else {
        0.0
    }
}

/// What each firing indicator contributes to the estimand.
///
/// For the Geometric family this is the mean `θ / (1 − θ)`, the quantity the
/// Geometric `V` is unbiased for under the failures-count parameterization.
pub fn target_scale(fam: &FamilyParam) -> f64 {
    match fam.kind() {
        FamilyKind::Geometric => fam.mean(),
        _ => fam.theta(),
    }
}

/// The random estimand `S(X, θ) = Σ_j U(X_j) · target_scale(fam_j)`.
pub fn estimand_s(rule: &ThresholdRule, fams: &[FamilyParam], sample: &SampleBatch) -> Result<f64> {
    if fams.len() != sample.len() {
        return Err(Error::LengthMismatch { params: fams.len(), observations: sample.len() });
    }
    Ok(fams
        .iter()
        .zip(sample.values())
        .map(|(fam, &x)| u_value(rule, x) * target_scale(fam))
        .sum())
}

/// Per-observation statistic `V(x)`.
pub fn v_component(kind: FamilyKind, rule: &ThresholdRule, x: f64) -> Result<f64> {
    check_supported(kind, rule)?;
    kind.check_support(x)?;
    Ok(v_unchecked(kind, rule, x))
}

#[inline]
pub(crate) fn v_unchecked(kind: FamilyKind, rule: &ThresholdRule, x: f64) -> f64 {
    let a = rule.threshold;
    let m = rule.boundary() as f64;
    match (rule.direction, kind) {
        (Direction::AtMost, FamilyKind::Poisson) => {
            if x <= m {
                x
            } else {
                0.0
            }
        }
        (Direction::AtMost, FamilyKind::Geometric) => x.min(m),
        (Direction::AtMost, FamilyKind::Exponential) => x.min(a),
        (Direction::AtMost, FamilyKind::UniformScale) => {
            if x <= a {
                2.0 * x
            } else {
                a
            }
        }
        (Direction::GreaterThan, FamilyKind::Poisson) => {
            if x >= m + 1.0 {
                x
            } else {
                0.0
            }
        }
        (Direction::GreaterThan, _) => unreachable!("checked by check_supported"),
    }
}

/// `V(X) = Σ_j V(X_j)`.
pub fn v_aggregate(kind: FamilyKind, rule: &ThresholdRule, sample: &SampleBatch) -> Result<f64> {
    check_supported(kind, rule)?;
    sample.values().iter().map(|&x| v_component(kind, rule, x)).sum()
}

/// Whether `X` lies in the zero set `B`: every `X_j ≥ m` for discrete
/// families, every `X_j > A` for continuous ones. `S = 0` on `B` for all `θ`.
pub fn in_zero_set(kind: FamilyKind, rule: &ThresholdRule, sample: &SampleBatch) -> Result<bool> {
    check_at_most(rule)?;
    Ok(zero_set_unchecked(kind, rule, sample.values()))
}

#[inline]
pub(crate) fn zero_set_unchecked(kind: FamilyKind, rule: &ThresholdRule, xs: &[f64]) -> bool {
    if kind.is_discrete() {
        let m = rule.boundary() as f64;
        xs.iter().all(|&x| x >= m)
    } else {
        xs.iter().all(|&x| x > rule.threshold)
    }
}

/// `V*(X)`: zero on the zero set, `V(X)` elsewhere.
pub fn v_star_aggregate(kind: FamilyKind, rule: &ThresholdRule, sample: &SampleBatch) -> Result<f64> {
    if in_zero_set(kind, rule, sample)? {
        Ok(0.0)
    } else {
        v_aggregate(kind, rule, sample)
    }
}
