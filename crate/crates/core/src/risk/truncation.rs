//! Greater-than rule, Poisson: what happens if `V` is also zeroed at the
//! first point where it is live.
//!
//! `V(x) = x · 1{x ≥ m + 1}` estimates `U(x)θ = θ · 1{x ≥ m}`. The variant
//! additionally reports 0 at `x = m + 1`, which changes the loss there from
//! `(m + 1 − θ)²` to `θ²`. That helps for small `θ` and hurts for large `θ`,
//! so neither estimator dominates the other.

use serde::Serialize;

use super::exact::poisson_tail_sum;
use crate::distributions::{FamilyKind, FamilyParam, TAIL_TOL};
use crate::error::{Error, Result};
use crate::estimators::{Direction, ThresholdRule};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationRisk {
    pub theta: f64,
    pub risk_v: f64,
    pub risk_variant: f64,
}

impl TruncationRisk {
    pub fn variant_is_worse(&self) -> bool {
        self.risk_variant > self.risk_v
    }
}

/// Exact squared-error risks of `V` and of the zero-at-`m + 1` variant for a
/// single Poisson observation under the greater-than rule.
///
/// Both series run over the same points up to the `1e-14` tail cutoff and
/// then on until the remaining terms vanish in double precision.
pub fn truncation_risk(fam: &FamilyParam, rule: &ThresholdRule) -> Result<TruncationRisk> {
    if fam.kind() != FamilyKind::Poisson {
        return Err(Error::Unsupported(format!(
            "the truncation experiment is defined for the Poisson family, not {}",
            fam.kind()
        )));
    }
    if rule.direction() != Direction::GreaterThan {
        return Err(Error::Unsupported("the truncation experiment uses the greater_than direction".into()));
    }
    let theta = fam.theta();
    let m = rule.boundary();
    let live = m + 1;
    let cutoff = fam.tail_cutoff(TAIL_TOL)?.max(live);

    // x = m: V = 0 against θ
    let at_boundary = theta * theta * fam.pmf(m);
    let mut body = 0.0;
    for x in (live + 1)..=cutoff {
        body += (x as f64 - theta).powi(2) * fam.pmf(x);
    }
    body += poisson_tail_sum(fam, cutoff + 1, |x| (x - theta).powi(2));

    let first_live = fam.pmf(live);
    let v_at_live = (live as f64 - theta).powi(2) * first_live;
    let variant_at_live = theta * theta * first_live;

    Ok(TruncationRisk {
        theta,
        risk_v: at_boundary + v_at_live + body,
        risk_variant: at_boundary + variant_at_live + body,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::risk::exact_component_risk_v;

    fn gt(a: f64) -> ThresholdRule {
        ThresholdRule::greater_than(a).unwrap()
    }

    #[test]
    fn matches_exact_risk_of_v() {
        for theta in [0.1, 1.0, 5.0, 10.0, 30.0] {
            let fam = FamilyParam::poisson(theta).unwrap();
            let r = truncation_risk(&fam, &gt(1.0)).unwrap();
            let exact = exact_component_risk_v(&fam, &gt(1.0)).unwrap();
            assert!((r.risk_v - exact).abs() <= 1e-10 * exact.max(1.0), "{theta}: {} vs {exact}", r.risk_v);
        }
    }

    #[test]
    fn sign_flips_with_theta() {
        let rule = gt(1.0);
        for theta in [5.0, 10.0] {
            assert!(truncation_risk(&FamilyParam::poisson(theta).unwrap(), &rule).unwrap().variant_is_worse());
        }
        assert!(!truncation_risk(&FamilyParam::poisson(0.1).unwrap(), &rule).unwrap().variant_is_worse());
    }

    #[test]
    fn rejects_other_settings() {
        let g = FamilyParam::geometric(0.5).unwrap();
        assert!(truncation_risk(&g, &gt(1.0)).is_err());
        let p = FamilyParam::poisson(2.0).unwrap();
        assert!(truncation_risk(&p, &ThresholdRule::at_most(1.0).unwrap()).is_err());
    }
}
