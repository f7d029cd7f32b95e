mod common;

use common::*;
use proptest::prelude::*;
use uvmethod::distributions::{FamilyKind, FamilyParam};
use uvmethod::estimators::ThresholdRule;
use uvmethod::risk::{exact_component_risk_v, exact_risk_v, exact_risk_v_star, improvement_exact};

#[test]
fn unbiased_on_design_grid() {
    for kind in FamilyKind::ALL {
        for a in THRESHOLDS {
            let rule = ThresholdRule::at_most(a).unwrap();
            for fam in design_grid(kind, a) {
                let (ev, es) = unbiasedness_pair(&fam, &rule);
                assert!((ev - es).abs() <= 1e-10, "{fam:?} A={a}: E V={ev} E S={es}");
            }
        }
    }
}

#[test]
fn greater_than_poisson_unbiased() {
    for a in THRESHOLDS {
        let rule = ThresholdRule::greater_than(a).unwrap();
        for fam in design_grid(FamilyKind::Poisson, a) {
            let (ev, es) = unbiasedness_pair(&fam, &rule);
            assert!((ev - es).abs() <= 1e-10, "{fam:?} A={a}: {ev} vs {es}");
        }
    }
}

#[test]
fn continuous_risks_match_closed_forms() {
    for a in THRESHOLDS {
        let rule = ThresholdRule::at_most(a).unwrap();
        for t in [0.5, 1.0, 3.0] {
            let fam = FamilyParam::exponential(t).unwrap();
            // ∫_0^A (x−θ)² e^{−x/θ}/θ dx + A² e^{−A/θ} = θ² (1 − e^{−A/θ})
            let closed = -t * t * (-a / t).exp_m1();
            let got = exact_component_risk_v(&fam, &rule).unwrap();
            assert!(rel_close(got, closed, 1e-12), "exp θ={t} A={a}: {got} vs {closed}");
        }
        for t in [0.5, 2.0, 10.0] {
            let fam = FamilyParam::uniform_scale(t).unwrap();
            let closed = if t <= a {
                t * t / 3.0
            } else {
                ((2.0 * a - t).powi(3) + t.powi(3)) / (6.0 * t) + a * a * (t - a) / t
            };
            let got = exact_component_risk_v(&fam, &rule).unwrap();
            assert!(rel_close(got, closed, 1e-12), "unif θ={t} A={a}: {got} vs {closed}");
        }
    }
}

#[test]
fn single_component_risks_match_brute_force() {
    for kind in FamilyKind::ALL {
        for a in THRESHOLDS {
            let rule = ThresholdRule::at_most(a).unwrap();
            for fam in design_grid(kind, a) {
                let exact = exact_component_risk_v(&fam, &rule).unwrap();
                let brute = brute_risk_v(&[fam], &rule);
                assert!(rel_close(exact, brute, 1e-10), "{fam:?} A={a}: {exact} vs {brute}");
            }
        }
    }
    for a in THRESHOLDS {
        let rule = ThresholdRule::greater_than(a).unwrap();
        for fam in design_grid(FamilyKind::Poisson, a) {
            let exact = exact_component_risk_v(&fam, &rule).unwrap();
            let brute = brute_risk_v(&[fam], &rule);
            assert!(rel_close(exact, brute, 1e-10), "{fam:?} A={a} gt: {exact} vs {brute}");
        }
    }
}

#[test]
fn pair_risks_match_brute_force() {
    let settings = [
        (FamilyKind::Poisson, [2.0, 5.0], 1.0),
        (FamilyKind::Geometric, [0.5, 0.9], 2.5),
        (FamilyKind::Exponential, [1.0, 3.0], 1.0),
        (FamilyKind::UniformScale, [2.0, 10.0], 1.0),
    ];
    for (kind, thetas, a) in settings {
        let fams: Vec<_> = thetas.iter().map(|&t| FamilyParam::new(kind, t).unwrap()).collect();
        let rule = ThresholdRule::at_most(a).unwrap();
        let rv = exact_risk_v(&fams, &rule).unwrap();
        let rvs = exact_risk_v_star(&fams, &rule).unwrap();
        assert!(rel_close(rv, brute_risk_v(&fams, &rule), 1e-9), "{kind} risk V");
        assert!(rel_close(rvs, brute_risk_v_star(&fams, &rule), 1e-9), "{kind} risk V*");
        assert!(rel_close(improvement_exact(&fams, &rule).unwrap(), brute_improvement(&fams, &rule), 1e-9));
    }
}

#[test]
fn poisson_unit_example_values() {
    let e2 = (-2.0f64).exp();
    let fam = [FamilyParam::poisson(2.0).unwrap()];
    let rule = ThresholdRule::at_most(1.0).unwrap();
    assert!((exact_risk_v(&fam, &rule).unwrap() - 14.0 * e2).abs() < 1e-14);
    assert!((exact_risk_v_star(&fam, &rule).unwrap() - 6.0 * e2).abs() < 1e-14);
    assert!((improvement_exact(&fam, &rule).unwrap() - 8.0 * e2).abs() < 1e-14);
    // 2-dim brute force, θ = (2, 2)
    let pair = [fam[0], fam[0]];
    assert!((brute_risk_v(&pair, &rule) - 28.0 * e2).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poisson_improvement_matches_subset_enumeration(
        thetas in proptest::collection::vec(0.2f64..15.0, 1..9),
        a in 0.0f64..10.0,
    ) {
        let fams: Vec<_> = thetas.iter().map(|&t| FamilyParam::poisson(t).unwrap()).collect();
        let rule = ThresholdRule::at_most(a).unwrap();
        let got = improvement_exact(&fams, &rule).unwrap();
        let want = subset_improvement(&thetas, a);
        prop_assert!((got - want).abs() <= 1e-10 * want.max(1.0), "{got} vs {want}");
    }

    #[test]
    fn risk_identity_and_bounds(
        kind_idx in 0usize..4,
        raw in proptest::collection::vec(0.05f64..0.95, 1..6),
        a in 0.0f64..10.0,
    ) {
        let kind = FamilyKind::ALL[kind_idx];
        let fams: Vec<_> = raw
            .iter()
            .map(|&u| {
                let t = if kind == FamilyKind::Geometric { u } else { u * 12.0 };
                FamilyParam::new(kind, t).unwrap()
            })
            .collect();
        let rule = ThresholdRule::at_most(a).unwrap();
        let rv = exact_risk_v(&fams, &rule).unwrap();
        let gain = improvement_exact(&fams, &rule).unwrap();
        let rvs = exact_risk_v_star(&fams, &rule).unwrap();
        prop_assert!(gain >= 0.0);
        prop_assert!((rvs - (rv - gain)).abs() <= 1e-10 * rv.max(1.0));
        prop_assert!(rvs >= -1e-12 && rvs <= rv);
    }
}
