//! The U,V method of unbiased estimation for threshold sums.
//!
//! Given independent observations `X_1, …, X_n` from one of four families
//! (Poisson, Geometric, Exponential, scale Uniform), the random estimand
//!
//! ```text
//! S(X, θ) = Σ_j U(X_j) · θ_j,      U(x) = 1{x ≤ A}
//! ```
//!
//! has a per-observation statistic `V(X_j)` with `E V(X_j) = E U(X_j)θ_j`.
//! The sum `V(X) = Σ_j V(X_j)` is unbiased for `S` but it is positive on the
//! zero set `B = {all X_j past the threshold}` where `S` vanishes for every
//! `θ`. Zeroing it there gives [`estimators::v_star_aggregate`], which is
//! never worse under any loss of the form `W(a − S)`.
//!
//! Modules:
//!
//! - [`distributions`]: pmf/density, CDF, survival, sampling, tail cutoffs.
//! - [`estimators`]: `U`, the per-family `V`, the aggregate `V` and `V*`.
//! - [`risk`]: losses, exact squared-error risks, the improvement of `V*`
//!   over `V`, seeded Monte Carlo, dominance scans.
//! - [`experiments`]: improvement tables and trend checks.
//! - [`quadrature`]: adaptive Gauss–Kronrod integration.
//!
//! ```
//! use uvmethod::distributions::FamilyKind;
//! use uvmethod::estimators::{v_aggregate, v_star_aggregate, SampleBatch, ThresholdRule};
//!
//! let rule = ThresholdRule::at_most(1.0).unwrap();
//! let x = SampleBatch::new(FamilyKind::Poisson, vec![2.0, 2.0]).unwrap();
//! assert_eq!(v_aggregate(FamilyKind::Poisson, &rule, &x).unwrap(), 4.0);
//! assert_eq!(v_star_aggregate(FamilyKind::Poisson, &rule, &x).unwrap(), 0.0);
//! ```

pub mod distributions;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod quadrature;
pub mod risk;
pub mod rng;

pub use error::{Error, Result};

// Book chapters are compiled as doc-tests so their snippets stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/estimators.md")]
    mod estimators {}
    #[doc = include_str!("../../../book/src/risk.md")]
    mod risk {}
    #[doc = include_str!("../../../book/src/monte-carlo.md")]
    mod monte_carlo {}
    #[doc = include_str!("../../../book/src/tables.md")]
    mod tables {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
