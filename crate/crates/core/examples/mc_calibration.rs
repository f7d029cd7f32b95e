//! Calibration of the Monte Carlo standard errors: for many independent
//! seeds, the z-scores `(mc − exact) / se` should look standard normal.
//!
//! ```sh
//! cargo run --release -p uvmethod --example mc_calibration
//! ```

use uvmethod::distributions::FamilyParam;
use uvmethod::estimators::ThresholdRule;
use uvmethod::risk::{exact_risk_v, exact_risk_v_star, mc_risk, LossSpec};

const SEEDS: u64 = 200;
const REPLICATES: usize = 200_000;

fn summary(name: &str, z: &[f64]) {
    let n = z.len() as f64;
    let mean = z.iter().sum::<f64>() / n;
    let sd = (z.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let beyond = z.iter().filter(|x| x.abs() > 3.0).count();
    println!("{name:>3}: mean z {mean:+.3}, sd {sd:.3}, |z| > 3 in {beyond}/{}", z.len());
}

fn main() -> uvmethod::Result<()> {
    let fams = [FamilyParam::poisson(2.0)?];
    let rule = ThresholdRule::at_most(1.0)?;
    let (rv, rvs) = (exact_risk_v(&fams, &rule)?, exact_risk_v_star(&fams, &rule)?);
    let (mut zv, mut zs) = (Vec::new(), Vec::new());
    for seed in 0..SEEDS {
        let report = mc_risk(&LossSpec::Squared, &fams, &rule, REPLICATES, seed)?;
        let se = report.std_error.expect("simulated reports carry standard errors");
        zv.push((report.risk_v - rv) / se.risk_v);
        if let (Some(mc), Some(se)) = (report.risk_v_star, se.risk_v_star) {
            zs.push((mc - rvs) / se);
        }
    }
    summary("V", &zv);
    summary("V*", &zs);
    Ok(())
}
