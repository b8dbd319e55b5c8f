use std::f64::consts::PI;

use magtunnel::config::{Domain, RunConfig, Spacing};
use magtunnel::degennes::REFERENCE;
use magtunnel::effective::{self, EffectivePotential};
use magtunnel::geometry::{BoundaryCurve, Geometry};
use magtunnel::splitting::{self, GapSeries, Normalization, SplittingInputs};
use proptest::prelude::*;

fn inputs(a: f64, b: f64, alpha0: f64) -> SplittingInputs {
    let geo = Geometry::new(&BoundaryCurve::ellipse(a, b).unwrap(), 2048).unwrap();
    let v = effective::potential(&geo.table, &geo.wells, &REFERENCE);
    let agmon = effective::agmon_data(&v).unwrap();
    SplittingInputs::new(&REFERENCE, &geo, &agmon, alpha0)
}

fn ellipse_potential() -> EffectivePotential {
    let geo = Geometry::new(&BoundaryCurve::ellipse(2.0, 1.0).unwrap(), 4096).unwrap();
    effective::potential(&geo.table, &geo.wells, &REFERENCE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn geometry_scales_covariantly(a in 1.3f64..3.0, lam in 0.5f64..2.5) {
        let base = Geometry::new(&BoundaryCurve::ellipse(a, 1.0).unwrap(), 2048).unwrap();
        let big = Geometry::new(&BoundaryCurve::ellipse(a * lam, lam).unwrap(), 2048).unwrap();
        prop_assert!((big.wells.kappa_max * lam - base.wells.kappa_max).abs() < 1e-9 * base.wells.kappa_max);
        prop_assert!((big.wells.kappa_min * lam - base.wells.kappa_min).abs() < 1e-9);
        prop_assert!((big.l() / lam - base.l()).abs() < 1e-9 * base.l());
        prop_assert!((big.flux.gamma0 / lam - base.flux.gamma0).abs() < 1e-10);
        prop_assert!((big.wells.k2 * lam.powi(3) / base.wells.k2 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ellipse_gap_is_cosine_modulated_envelope(hinv in 120f64..2000.0, alpha0 in -1.0f64..1.0) {
        let inp = inputs(2.0, 1.0, alpha0);
        let h = 1.0 / hinv;
        let gap = splitting::ln_gap_formula(&inp, h).exp();
        let env = 2.0 * splitting::ln_envelope(&inp, h).exp();
        let c = inp.phase_mod_2pi(h).cos().abs();
        prop_assert!(gap <= env * (1.0 + 1e-12));
        prop_assert!((gap - env * c).abs() <= 1e-9 * env);
    }

    #[test]
    fn formula_is_periodic_in_alpha0(hinv in 120f64..2000.0, alpha0 in -1.0f64..1.0) {
        let inp = inputs(2.0, 1.0, alpha0);
        let shifted = inp.with_alpha0(alpha0 + PI / inp.l);
        let h = 1.0 / hinv;
        let a = splitting::ln_gap_formula(&inp, h);
        let b = splitting::ln_gap_formula(&shifted, h);
        prop_assert!(!a.is_finite() || (a - b).abs() < 1e-6);
    }

    #[test]
    fn alpha0_round_trips(truth in 0.0f64..1.5) {
        let inp = inputs(2.0, 1.0, 0.0);
        let target = inp.with_alpha0(truth);
        let hs: Vec<f64> = (0..500).map(|i| 1.0 / (150.0 + 0.01 * i as f64)).collect();
        let gaps: Vec<f64> = hs.iter().map(|&h| splitting::ln_gap_formula(&target, h).exp()).collect();
        let fit = splitting::fit_alpha0(&GapSeries::new(hs, gaps, Normalization::Physical), &inp).unwrap();
        let period = PI / inp.l;
        let d = (fit.alpha0 - truth).rem_euclid(period);
        prop_assert!(d.min(period - d) < 1e-7, "fit {} truth {}", fit.alpha0, truth);
    }

    #[test]
    fn config_text_round_trips(
        a in 1.1f64..4.0,
        count in 2usize..500,
        h_min in 1e-4f64..1e-3,
        quarter in any::<bool>(),
        alpha0 in proptest::option::of(-2.0f64..2.0),
        twod in any::<bool>(),
    ) {
        let cfg = RunConfig {
            domain: Domain::Ellipse { a, b: 1.0 },
            count,
            h_min,
            h_max: 1e-2,
            spacing: if quarter { Spacing::Quarter } else { Spacing::Inverse },
            alpha0,
            boundary2d: twod,
            ..RunConfig::default()
        };
        let back = RunConfig::parse(&cfg.to_text()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn effective_spectrum_flux_period_and_reversal(theta in -2.0f64..2.0, hinv in 150f64..600.0) {
        let v = ellipse_potential();
        let h = 1.0 / hinv;
        let e0 = effective::effective_eigs(&v, h, theta, 4).unwrap();
        let e1 = effective::effective_eigs(&v, h, theta + PI / v.l, 4).unwrap();
        let e2 = effective::effective_eigs(&v, h, -theta, 4).unwrap();
        for k in 0..4 {
            prop_assert!((e0[k] - e1[k]).abs() < 1e-8);
            prop_assert!((e0[k] - e2[k]).abs() < 1e-8);
        }
    }
}

#[test]
fn flux_free_pair_approaches_harmonic_level() {
    // the mean of the pair tends to (mu2 / 2) g h^{1/4}, relative error O(h^{1/4})
    let v = ellipse_potential();
    let g = effective::prefactors(&v).unwrap().g;
    let err = |h: f64| {
        let e = effective::effective_eigs(&v, h, 0.0, 2).unwrap();
        (0.5 * (e[0] + e[1]) / (0.5 * REFERENCE.mu2 * g * h.powf(0.25)) - 1.0).abs()
    };
    let (a, b) = (err(1e-3), err(1e-3 / 16.0));
    assert!(a < 0.5 && b < a, "{a} {b}");
    let rate = (a / b).log2();
    assert!((0.6..1.6).contains(&rate), "rate {rate}");
}

#[test]
fn asymmetric_actions_suppress_alpha0_dependence() {
    let v = ellipse_potential();
    let agmon = effective::agmon_data(&v).unwrap();
    let geo = Geometry::new(&BoundaryCurve::ellipse(2.0, 1.0).unwrap(), 4096).unwrap();
    let mut inp = SplittingInputs::new(&REFERENCE, &geo, &agmon, 0.0);
    inp.s_d = inp.s_u + 1.0;
    let h = 1e-4;
    let a = splitting::ln_gap_formula(&inp, h);
    let b = splitting::ln_gap_formula(&inp.with_alpha0(0.37), h);
    // |1 + r e^{i x}| / |1 + r e^{i y}| - 1 is at most 2r / (1 - r)
    let r = (-1.0 / h.powf(0.25)).exp();
    assert!(((a - b).exp() - 1.0).abs() <= 2.0 * r / (1.0 - r));
}

#[test]
fn synthetic_series_without_oscillation_is_insufficient() {
    let inp = inputs(2.0, 1.0, 0.0);
    let hs: Vec<f64> = (0..200).map(|i| 1.0 / (150.0 + 0.01 * i as f64)).collect();
    let gaps: Vec<f64> = hs.iter().map(|&h| 2.0 * splitting::ln_envelope(&inp, h).exp()).collect();
    assert!(splitting::fit_alpha0(&GapSeries::new(hs, gaps, Normalization::Physical), &inp).is_err());
}
