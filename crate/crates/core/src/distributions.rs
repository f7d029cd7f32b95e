//! The four observation families.
//!
//! | family        | mass / density        | support        | parameter    |
//! |---------------|-----------------------|----------------|--------------|
//! | Poisson       | `e^{-θ} θ^x / x!`     | `0, 1, 2, …`   | `θ > 0`      |
//! | Geometric     | `(1 − θ) θ^x`         | `0, 1, 2, …`   | `0 < θ < 1`  |
//! | Exponential   | `e^{-x/θ} / θ`        | `x > 0`        | `θ > 0`      |
//! | Uniform scale | `1 / θ`               | `0 < x < θ`    | `θ > 0`      |
//!
//! The Geometric family counts failures before the first success, so its
//! support starts at zero and its mean is `θ / (1 − θ)`.

use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};

/// Default tail mass left out of truncated series.
pub const TAIL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Poisson,
    Geometric,
    Exponential,
    UniformScale,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] = [
        FamilyKind::Poisson,
        FamilyKind::Geometric,
        FamilyKind::Exponential,
        FamilyKind::UniformScale,
    ];

    /// Integer support `{0, 1, 2, …}`.
    pub fn is_discrete(self) -> bool {
        matches!(self, FamilyKind::Poisson | FamilyKind::Geometric)
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Poisson => "poisson",
            FamilyKind::Geometric => "geometric",
            FamilyKind::Exponential => "exponential",
            FamilyKind::UniformScale => "uniform_scale",
        }
    }

    /// Checks that `x` is a support point of this kind: a nonnegative
    /// integer for the discrete families, a nonnegative real otherwise.
    pub fn check_support(self, x: f64) -> Result<()> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::Domain(format!(
                "{} observation must be finite and nonnegative, got {x}",
                self.name()
            )));
        }
        if self.is_discrete() && x.fract() != 0.0 {
            return Err(Error::Domain(format!(
                "{} observation must be an integer, got {x}",
                self.name()
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A family together with its parameter `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyParam {
    #[serde(rename = "family")]
    kind: FamilyKind,
    theta: f64,
}

impl FamilyParam {
    pub fn new(kind: FamilyKind, theta: f64) -> Result<Self> {
        let ok = theta.is_finite()
            && theta > 0.0
            && (kind != FamilyKind::Geometric || theta < 1.0);
        if !ok {
            let range = if kind == FamilyKind::Geometric {
                "(0, 1)"
            } else {
                "(0, ∞)"
            };
            return Err(Error::InvalidParameter(format!(
                "{kind} parameter must lie in {range}, got {theta}"
            )));
        }
        Ok(FamilyParam { kind, theta })
    }

    pub fn poisson(theta: f64) -> Result<Self> {
        Self::new(FamilyKind::Poisson, theta)
    }

    pub fn geometric(theta: f64) -> Result<Self> {
        Self::new(FamilyKind::Geometric, theta)
    }

    pub fn exponential(theta: f64) -> Result<Self> {
        Self::new(FamilyKind::Exponential, theta)
    }

    pub fn uniform_scale(theta: f64) -> Result<Self> {
        Self::new(FamilyKind::UniformScale, theta)
    }

    #[inline]
    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Point mass `P(X = k)`. Zero for the continuous families.
    pub fn pmf(&self, k: u64) -> f64 {
        let t = self.theta;
        match self.kind {
            FamilyKind::Poisson => (k as f64 * t.ln() - t - ln_factorial(k)).exp(),
            FamilyKind::Geometric => (1.0 - t) * t.powf(k as f64),
            FamilyKind::Exponential | FamilyKind::UniformScale => 0.0,
        }
    }

    /// Mass function for discrete families, density for continuous ones.
    ///
    /// Fails for a negative `x`, or a non-integer `x` in a discrete family.
    /// The continuous densities are zero off their open supports.
    pub fn mass(&self, x: f64) -> Result<f64> {
        self.kind.check_support(x)?;
        let t = self.theta;
        Ok(match self.kind {
            FamilyKind::Poisson | FamilyKind::Geometric => self.pmf(x as u64),
            FamilyKind::Exponential if x > 0.0 => (-x / t).exp() / t,
            FamilyKind::UniformScale if x > 0.0 && x < t => 1.0 / t,
            _ => 0.0,
        })
    }

    /// `P(X ≤ x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x < 0.0 {
            return 0.0;
        }
        let t = self.theta;
        match self.kind {
            FamilyKind::Poisson => {
                let (head, tail) = self.poisson_split(x);
                tail.map_or(head, |tail| 1.0 - tail)
            }
            FamilyKind::Geometric => -((x.floor() + 1.0) * t.ln()).exp_m1(),
            FamilyKind::Exponential => -(-x / t).exp_m1(),
            FamilyKind::UniformScale => (x / t).min(1.0),
        }
    }

    /// `P(X > x)`.
    ///
    /// For the Poisson family the upper tail is summed directly once the
    /// head passes one half, so small tails keep full relative precision.
    pub fn survival(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x < 0.0 {
            return 1.0;
        }
        let t = self.theta;
        match self.kind {
            FamilyKind::Poisson => {
                let (head, tail) = self.poisson_split(x);
                tail.unwrap_or(1.0 - head)
            }
            FamilyKind::Geometric => ((x.floor() + 1.0) * t.ln()).exp(),
            FamilyKind::Exponential => (-x / t).exp(),
            FamilyKind::UniformScale => (1.0 - x / t).max(0.0),
        }
    }

    // Returns the head sum P(X ≤ ⌊x⌋) and, when it exceeds one half, the
    // directly summed tail P(X > ⌊x⌋).
    fn poisson_split(&self, x: f64) -> (f64, Option<f64>) {
        let t = self.theta;
        let k = x.floor() as u64;
        let mut term = (-t).exp();
        let mut head = term;
        for j in 1..=k {
            term *= t / j as f64;
            head += term;
        }
        if head <= 0.5 {
            return (head, None);
        }
        let mut tail = 0.0;
        let mut term = self.pmf(k + 1);
        let mut j = k + 1;
        while term > 0.0 {
            tail += term;
            j += 1;
            term *= t / j as f64;
            if j as f64 > t && term <= tail * 1e-18 {
                break;
            }
        }
        (head, Some(tail))
    }

    pub fn mean(&self) -> f64 {
        let t = self.theta;
        match self.kind {
            FamilyKind::Poisson | FamilyKind::Exponential => t,
            FamilyKind::Geometric => t / (1.0 - t),
            FamilyKind::UniformScale => t / 2.0,
        }
    }

    pub fn variance(&self) -> f64 {
        let t = self.theta;
        match self.kind {
            FamilyKind::Poisson => t,
            FamilyKind::Geometric => t / ((1.0 - t) * (1.0 - t)),
            FamilyKind::Exponential => t * t,
            FamilyKind::UniformScale => t * t / 12.0,
        }
    }

    /// One draw by inversion.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let t = self.theta;
        let u: f64 = rng.sample(Open01);
        match self.kind {
            FamilyKind::Poisson => {
                // sequential search; adequate for moderate θ
                let mut x = 0u64;
                let mut p = (-t).exp();
                let mut cdf = p;
                while u > cdf {
                    x += 1;
                    p *= t / x as f64;
                    let next = cdf + p;
                    if next == cdf && x as f64 > t {
                        break;
                    }
                    cdf = next;
                }
                x as f64
            }
            FamilyKind::Geometric => (u.ln() / t.ln()).floor(),
            FamilyKind::Exponential => -t * u.ln(),
            FamilyKind::UniformScale => t * u,
        }
    }

    /// `count` independent draws from `rng`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> Vec<f64> {
        (0..count).map(|_| self.draw(rng)).collect()
    }

    /// Smallest `x_max` with `P(X > x_max) ≤ tol`.
    pub fn tail_cutoff(&self, tol: f64) -> Result<u64> {
        if !self.kind.is_discrete() {
            return Err(Error::Domain(format!(
                "tail cutoff is defined for discrete families, not {}",
                self.kind
            )));
        }
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tail tolerance must lie in (0, 1), got {tol}"
            )));
        }
        let mut x = match self.kind {
            // θ^{x+1} ≤ tol; start just below the closed-form answer
            FamilyKind::Geometric => {
                ((tol.ln() / self.theta.ln()).ceil() - 2.0).max(0.0) as u64
            }
            _ => 0,
        };
        while self.survival(x as f64) > tol {
            x += 1;
        }
        Ok(x)
    }
}
