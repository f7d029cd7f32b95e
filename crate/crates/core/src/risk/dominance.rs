//! Pointwise comparison of `V*` against `V`.
//!
//! At every sample point and every `θ` on the family's grid the loss of `V*`
//! must not exceed the loss of `V`. Discrete families are enumerated over
//! `{0, …, xmax}^n`; any family can instead be checked at seeded random
//! points, point `k` drawn with the `k`-th grid parameter (cyclically).

use serde::Serialize;

use super::{theta_grid, LossSpec};
use crate::distributions::{FamilyKind, FamilyParam};
use crate::error::{Error, Result};
use crate::estimators::{target_scale, u_value, v_unchecked, zero_set_unchecked, Direction, ThresholdRule};
use crate::rng::stream;

/// Largest dimension accepted for exhaustive enumeration.
pub const MAX_ENUMERATION_DIM: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanDomain {
    Enumerate { xmax: u64 },
    Sample { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub family: FamilyKind,
    pub n: usize,
    #[serde(rename = "A")]
    pub threshold: f64,
    pub loss: String,
    pub thetas: Vec<f64>,
    pub points_checked: usize,
    /// `(point, θ)` pairs where `V*` lost to `V`.
    pub violations: usize,
    /// Points where `V*` beats `V` for some grid `θ`.
    pub strict_points: usize,
    /// Points in the zero set.
    pub zero_set_points: usize,
}

struct Scanner<'a> {
    kind: FamilyKind,
    rule: &'a ThresholdRule,
    loss: &'a LossSpec,
    scales: Vec<f64>,
    report: ScanReport,
}

impl Scanner<'_> {
    fn check(&mut self, xs: &[f64]) {
        let v: f64 = xs.iter().map(|&x| v_unchecked(self.kind, self.rule, x)).sum();
        let in_b = zero_set_unchecked(self.kind, self.rule, xs);
        let v_star = if in_b { 0.0 } else { v };
        let fired: f64 = xs.iter().map(|&x| u_value(self.rule, x)).sum();

        let mut strict = false;
        for &scale in &self.scales {
            let s = fired * scale;
            let lv = self.loss.value(v, s);
            let lstar = self.loss.value(v_star, s);
            // NaN counts as a violation
            if !(lstar <= lv) {
                self.report.violations += 1;
            } else if lstar < lv {
                strict = true;
            }
        }
        self.report.points_checked += 1;
        self.report.strict_points += usize::from(strict);
        self.report.zero_set_points += usize::from(in_b);
    }
}

/// Checks `loss(V*, S) ≤ loss(V, S)` over a grid of `θ` (equal across the
/// `n` components) at enumerated or sampled points.
pub fn dominance_scan(
    kind: FamilyKind,
    n: usize,
    rule: &ThresholdRule,
    loss: &LossSpec,
    domain: ScanDomain,
) -> Result<ScanReport> {
    if rule.direction() != Direction::AtMost {
        return Err(Error::Unsupported("dominance scans need the at_most direction".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let thetas = theta_grid(kind, rule);
    let fams: Vec<FamilyParam> = thetas
        .iter()
        .map(|&t| FamilyParam::new(kind, t))
        .collect::<Result<_>>()?;
    let scales = fams.iter().map(target_scale).collect();

    let mut scanner = Scanner {
        kind,
        rule,
        loss,
        scales,
        report: ScanReport {
            family: kind,
            n,
            threshold: rule.threshold(),
            loss: loss.name().to_string(),
            thetas,
            points_checked: 0,
            violations: 0,
            strict_points: 0,
            zero_set_points: 0,
        },
    };

    match domain {
        ScanDomain::Enumerate { xmax } => {
            if !kind.is_discrete() {
                return Err(Error::InvalidParameter(format!(
                    "enumeration needs a discrete family, got {kind}"
                )));
            }
            if n > MAX_ENUMERATION_DIM {
                return Err(Error::InvalidParameter(format!(
                    "enumeration supports n ≤ {MAX_ENUMERATION_DIM}, got {n}"
                )));
            }
            // odometer over {0, …, xmax}^n
            let mut idx = vec![0u64; n];
            let mut xs = vec![0.0; n];
            'outer: loop {
                for (x, &i) in xs.iter_mut().zip(&idx) {
                    *x = i as f64;
                }
                scanner.check(&xs);
                for digit in idx.iter_mut() {
                    if *digit < xmax {
                        *digit += 1;
                        continue 'outer;
                    }
                    *digit = 0;
                }
                break;
            }
        }
        ScanDomain::Sample { count, seed } => {
            if count == 0 {
                return Err(Error::InvalidParameter("sample count must be at least 1".into()));
            }
            let mut xs = vec![0.0; n];
            for k in 0..count {
                let fam = &fams[k % fams.len()];
                let mut rng = stream(seed, k as u64);
                for x in xs.iter_mut() {
                    *x = fam.draw(&mut rng);
                }
                scanner.check(&xs);
            }
        }
    }
    Ok(scanner.report)
}
