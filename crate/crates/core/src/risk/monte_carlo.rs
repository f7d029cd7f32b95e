//! Seeded Monte Carlo risk estimation.
//!
//! Replicate `k` draws from stream `(seed, k)` and the per-replicate values
//! are reduced in replicate order with compensated summation, so the report
//! is bit-identical whatever the thread count.

use rayon::prelude::*;

use super::{LossSpec, McDiagnostics, Method, RiskReport, StdErrors, Target};
use crate::distributions::FamilyParam;
use crate::error::{Error, Result};
use crate::estimators::{
    supports, target_scale, u_value, v_unchecked, zero_set_unchecked, Direction, ThresholdRule,
};
use crate::rng::stream;

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Mean and standard error of the mean, two passes.
fn mean_and_se(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let mut acc = CompensatedSum::default();
    let mut count = 0usize;
    for x in values.clone() {
        acc.add(x);
        count += 1;
    }
    let n = count as f64;
    let mean = acc.total() / n;
    let mut ss = CompensatedSum::default();
    for x in values {
        ss.add((x - mean) * (x - mean));
    }
    let var = ss.total() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, Copy)]
struct Replicate {
    loss_v: f64,
    loss_v_star: f64,
    v: f64,
    target: f64,
}

fn validate(fams: &[FamilyParam], rule: &ThresholdRule, replicates: usize) -> Result<()> {
    if replicates < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 replicates, got {replicates}")));
    }
    let first = fams
        .first()
        .ok_or_else(|| Error::InvalidParameter("at least one component is required".into()))?;
    if fams.iter().any(|f| f.kind() != first.kind()) {
        return Err(Error::InvalidParameter("all components must share one family".into()));
    }
    if !supports(first.kind(), rule.direction()) {
        return Err(Error::Unsupported(format!(
            "no V statistic for {} with direction {}",
            first.kind(),
            rule.direction()
        )));
    }
    Ok(())
}

fn simulate(
    target: Target,
    loss: &LossSpec,
    fams: &[FamilyParam],
    rule: &ThresholdRule,
    replicates: usize,
    seed: u64,
) -> Result<RiskReport> {
    validate(fams, rule, replicates)?;
    let kind = fams[0].kind();
    let has_star = rule.direction() == Direction::AtMost;
    let scales: Vec<f64> = fams.iter().map(target_scale).collect();

    let draws: Vec<Replicate> = (0..replicates as u64)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(fams.len()),
            |xs, k| {
                let mut rng = stream(seed, k);
                xs.clear();
                xs.extend(fams.iter().map(|f| f.draw(&mut rng)));
                let v: f64 = xs.iter().map(|&x| v_unchecked(kind, rule, x)).sum();
                let s = match target {
                    Target::Estimand => xs.iter().zip(&scales).map(|(&x, &c)| u_value(rule, x) * c).sum(),
                    Target::Prediction => xs
                        .iter()
                        .zip(fams)
                        .map(|(&x, f)| {
                            let y = f.draw(&mut rng);
                            y * u_value(rule, x)
                        })
                        .sum(),
                };
                let v_star = if has_star && zero_set_unchecked(kind, rule, xs) { 0.0 } else { v };
                Replicate { loss_v: loss.value(v, s), loss_v_star: loss.value(v_star, s), v, target: s }
            },
        )
        .collect();

    let (risk_v, se_v) = mean_and_se(draws.iter().map(|r| r.loss_v));
    let (mean_v, _) = mean_and_se(draws.iter().map(|r| r.v));
    let (mean_target, _) = mean_and_se(draws.iter().map(|r| r.target));
    let (mean_bias, se_bias) = mean_and_se(draws.iter().map(|r| r.v - r.target));

    let (risk_v_star, improvement, std_error, max_diff) = if has_star {
        let (risk_star, se_star) = mean_and_se(draws.iter().map(|r| r.loss_v_star));
        let (gain, se_gain) = mean_and_se(draws.iter().map(|r| r.loss_v - r.loss_v_star));
        let max_diff = draws
            .iter()
            .map(|r| r.loss_v_star - r.loss_v)
            .fold(f64::NEG_INFINITY, f64::max);
        (
            Some(risk_star),
            Some(gain),
            StdErrors { risk_v: se_v, risk_v_star: Some(se_star), improvement: Some(se_gain) },
            Some(max_diff),
        )
    } else {
        (None, None, StdErrors { risk_v: se_v, risk_v_star: None, improvement: None }, None)
    };

    Ok(RiskReport {
        method: Method::MonteCarlo,
        target,
        loss: loss.name().to_string(),
        risk_v,
        risk_v_star,
        improvement,
        std_error: Some(std_error),
        replicates: Some(replicates),
        seed: Some(seed),
        diagnostics: Some(McDiagnostics {
            mean_v,
            mean_target,
            mean_bias,
            se_bias,
            max_paired_loss_difference: max_diff,
        }),
    })
}

/// Simulated risks of `V` and `V*` against the estimand `S`, paired on the
/// same draws.
pub fn mc_risk(
    loss: &LossSpec,
    fams: &[FamilyParam],
    rule: &ThresholdRule,
    replicates: usize,
    seed: u64,
) -> Result<RiskReport> {
    simulate(Target::Estimand, loss, fams, rule, replicates, seed)
}

/// Simulated risks against the prediction target `S* = Σ Y_j U(X_j)`, each
/// `Y_j` an independent draw from the law of `X_j`.
pub fn mc_prediction_risk(
    loss: &LossSpec,
    fams: &[FamilyParam],
    rule: &ThresholdRule,
    replicates: usize,
    seed: u64,
) -> Result<RiskReport> {
    simulate(Target::Prediction, loss, fams, rule, replicates, seed)
}
