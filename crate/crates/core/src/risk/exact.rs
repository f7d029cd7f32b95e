//! Exact squared-error risks.
//!
//! The per-observation deviations `V(X_j) − U(X_j)·c_j` are independent with
//! mean zero, so the risk of `V` is the sum of component risks. `V*` differs
//! from `V` only on the zero set `B`, where `S = 0`, so
//!
//! ```text
//! risk(V) − risk(V*) = E[V² · 1_B]
//! ```
//!
//! which has a closed form for every family.

use statrs::function::factorial::binomial;

use super::{Method, RiskReport, Target};
use crate::distributions::{FamilyKind, FamilyParam};
use crate::error::{Error, Result};
use crate::estimators::{supports, target_scale, Direction, ThresholdRule};
use crate::quadrature::integrate;

const QUAD_TOL: f64 = 1e-12;

fn common_kind(fams: &[FamilyParam]) -> Result<FamilyKind> {
    let first = fams
        .first()
        .ok_or_else(|| Error::InvalidParameter("at least one component is required".into()))?;
    if let Some(other) = fams.iter().find(|f| f.kind() != first.kind()) {
        return Err(Error::InvalidParameter(format!(
            "all components must share one family, found {} and {}",
            first.kind(),
            other.kind()
        )));
    }
    Ok(first.kind())
}

fn require_at_most(rule: &ThresholdRule) -> Result<()> {
    if rule.direction() == Direction::AtMost {
        Ok(())
    } else {
        Err(Error::Unsupported("V* and its improvement are defined for the at_most direction only".into()))
    }
}

/// `Σ_{x ≥ start} g(x) · P(X = x)` for a Poisson law, summed until the terms
/// past the mode stop contributing.
pub(crate) fn poisson_tail_sum(fam: &FamilyParam, start: u64, g: impl Fn(f64) -> f64) -> f64 {
    let theta = fam.theta();
    let mut pmf = fam.pmf(start);
    let mut sum = 0.0;
    let mut mass = 0.0;
    let mut x = start;
    loop {
        let term = g(x as f64) * pmf;
        sum += term;
        mass += pmf;
        x += 1;
        pmf *= theta / x as f64;
        let negligible = pmf <= mass * 1e-18 && term.abs() <= sum.abs() * 1e-18;
        if x as f64 > theta && (pmf == 0.0 || negligible) {
            break;
        }
    }
    sum
}

/// `E[(V(X) − U(X)·c)²]` for a single observation, squared-error loss.
pub fn exact_component_risk_v(fam: &FamilyParam, rule: &ThresholdRule) -> Result<f64> {
    let kind = fam.kind();
    if !supports(kind, rule.direction()) {
        return Err(Error::Unsupported(format!(
            "no V statistic for {kind} with direction {}",
            rule.direction()
        )));
    }
    let theta = fam.theta();
    let a = rule.threshold();
    let m = rule.boundary();
    let mf = m as f64;

    let risk = match (rule.direction(), kind) {
        (Direction::AtMost, FamilyKind::Poisson) => {
            let head: f64 = (0..m).map(|x| (x as f64 - theta).powi(2) * fam.pmf(x)).sum();
            head + mf * mf * fam.pmf(m)
        }
        (Direction::AtMost, FamilyKind::Geometric) => {
            let mu = target_scale(fam);
            let head: f64 = (0..m).map(|x| (x as f64 - mu).powi(2) * fam.pmf(x)).sum();
            head + mf * mf * fam.survival(mf - 1.0)
        }
        (Direction::AtMost, FamilyKind::Exponential) => {
            let below = integrate(|x| (x - theta).powi(2) * (-x / theta).exp() / theta, 0.0, a, QUAD_TOL);
            below.value + a * a * (-a / theta).exp()
        }
        (Direction::AtMost, FamilyKind::UniformScale) => {
            if theta <= a {
                // V = 2X and S = θ everywhere
                theta * theta / 3.0
            } else {
                let below = integrate(|x| (2.0 * x - theta).powi(2) / theta, 0.0, a, QUAD_TOL);
                below.value + a * a * (theta - a) / theta
            }
        }
        (Direction::GreaterThan, FamilyKind::Poisson) => {
            // x = m: V = 0, S = θ; x ≥ m + 1: V = x, S = θ
            theta * theta * fam.pmf(m) + poisson_tail_sum(fam, m + 1, |x| (x - theta).powi(2))
        }
        (Direction::GreaterThan, _) => unreachable!("rejected above"),
    };
    Ok(risk)
}

/// Squared-error risk of `V(X) = Σ V(X_j)`.
pub fn exact_risk_v(fams: &[FamilyParam], rule: &ThresholdRule) -> Result<f64> {
    common_kind(fams)?;
    fams.iter().map(|fam| exact_component_risk_v(fam, rule)).sum()
}

/// `risk(V) − risk(V*) = E[V² · 1_B]` under squared error.
pub fn improvement_exact(fams: &[FamilyParam], rule: &ThresholdRule) -> Result<f64> {
    let kind = common_kind(fams)?;
    require_at_most(rule)?;
    let n = fams.len() as f64;
    let a = rule.threshold();
    let m = rule.boundary();
    let mf = m as f64;

    let value = match kind {
        FamilyKind::Poisson => {
            // On B each X_j is either exactly m (V_j = m) or above m (V_j = 0),
            // so V = m·K with K the number of components sitting at m.
            let at_m = |f: &FamilyParam| f.pmf(m);
            let above_m = |f: &FamilyParam| f.survival(mf);
            let all_equal = fams.iter().all(|f| f.theta() == fams[0].theta());
            let second_moment = if all_equal {
                let p = at_m(&fams[0]);
                let r = above_m(&fams[0]);
                let n = fams.len() as u64;
                (1..=n)
                    .map(|i| {
                        let i_f = i as f64;
                        i_f * i_f * binomial(n, i) * p.powi(i as i32) * r.powi((n - i) as i32)
                    })
                    .sum::<f64>()
            } else {
                // coefficients of Π_j (r_j + p_j z): P(K = k, X ∈ B)
                let mut coeffs = vec![1.0];
                for fam in fams {
                    let (p, r) = (at_m(fam), above_m(fam));
                    let mut next = vec![0.0; coeffs.len() + 1];
                    for (k, &c) in coeffs.iter().enumerate() {
                        next[k] += c * r;
                        next[k + 1] += c * p;
                    }
                    coeffs = next;
                }
                coeffs.iter().enumerate().map(|(k, &c)| (k * k) as f64 * c).sum()
            };
            mf * mf * second_moment
        }
        // V = n·m on B
        FamilyKind::Geometric => {
            (n * mf).powi(2) * fams.iter().map(|f| f.survival(mf - 1.0)).product::<f64>()
        }
        // V = n·A on B
        FamilyKind::Exponential | FamilyKind::UniformScale => {
            (n * a).powi(2) * fams.iter().map(|f| f.survival(a)).product::<f64>()
        }
    };
    Ok(value)
}

/// Squared-error risk of `V*`.
pub fn exact_risk_v_star(fams: &[FamilyParam], rule: &ThresholdRule) -> Result<f64> {
    let improvement = improvement_exact(fams, rule)?;
    Ok(exact_risk_v(fams, rule)? - improvement)
}

/// Exact squared-error report. `V*` entries are `None` for the
/// greater-than rule.
pub fn exact_report(fams: &[FamilyParam], rule: &ThresholdRule) -> Result<RiskReport> {
    let risk_v = exact_risk_v(fams, rule)?;
    let (risk_v_star, improvement) = match rule.direction() {
        Direction::AtMost => {
            let improvement = improvement_exact(fams, rule)?;
            (Some(risk_v - improvement), Some(improvement))
        }
        Direction::GreaterThan => (None, None),
    };
    Ok(RiskReport {
        method: Method::Exact,
        target: Target::Estimand,
        loss: "squared".into(),
        risk_v,
        risk_v_star,
        improvement,
        std_error: None,
        replicates: None,
        seed: None,
        diagnostics: None,
    })
}
