mod common;

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use pite_lab::analysis::*;
use pite_lab::engine::{energy_shift, step_factor, GammaParams, InitialWeights, ShiftPolicy};
use pite_lab::hamiltonians::Spectrum;
use pite_lab::schedules::{constant_schedule, exponential_schedule, linear_schedule, ScheduleKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn si_oracle(x: f64) -> f64 {
    let f = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
    common::integrate_panels(&f, 0.0, x, 1.0, 1e-14)
}

fn cin_oracle(x: f64) -> f64 {
    // (1 - cos t)/t = 2 sin²(t/2)/t avoids cancellation near 0.
    let f = |t: f64| {
        if t == 0.0 {
            0.0
        } else {
            2.0 * (t / 2.0).sin().powi(2) / t
        }
    };
    common::integrate_panels(&f, 0.0, x, 1.0, 1e-14)
}

fn log_grid() -> Vec<f64> {
    (0..=90)
        .map(|i| 10f64.powf(-6.0 + i as f64 / 10.0))
        .collect()
}

#[test]
fn special_functions_match_quadrature() {
    for x in log_grid() {
        let (s, c) = (si_oracle(x), cin_oracle(x));
        assert!((si(x) - s).abs() < 1e-10, "Si({x}): {} vs {s}", si(x));
        assert!((cin(x) - c).abs() < 1e-10, "Cin({x}): {} vs {c}", cin(x));
        let ci_oracle = EULER_GAMMA + x.ln() - c;
        assert!((ci(x).unwrap() - ci_oracle).abs() < 1e-10, "Ci({x})");
    }
}

#[test]
fn ci_cin_identity() {
    for x in log_grid() {
        let lhs = ci(x).unwrap();
        let rhs = EULER_GAMMA + x.ln() - cin(x);
        assert!((lhs - rhs).abs() < 1e-12, "x={x}");
    }
}

#[test]
fn special_function_examples() {
    assert_eq!(si(0.0), 0.0);
    assert_eq!(cin(0.0), 0.0);
    assert!(ci(0.0).is_err());
    assert!((si(PI) - 1.851_937_051_982_466).abs() < 1e-14);
    assert!((si(1e3) - FRAC_PI_2).abs() < 2e-3);
    assert!((si(-2.0) + si(2.0)).abs() < 1e-16);
}

#[test]
fn bounds_bracket_quadrature_of_log_cos() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let k = rng.random_range(2..300usize);
        let a = rng.random_range(-1.0..3.0);
        let b = rng.random_range(1e-3..0.2);
        let p = LinearBoundParams::new(a, b, k).unwrap();
        let g = common::log_cos2_integral(a, a + b * k as f64) / b;
        let bounds = log_damping_bounds(&p);
        let slack = 1e-9 * g.abs().max(1.0);
        assert!(
            bounds.lower() - slack <= g && g <= bounds.upper() + slack,
            "a={a} b={b} K={k}: {} <= {g} <= {}",
            bounds.lower(),
            bounds.upper()
        );
    }
}

#[test]
fn bounds_limit_for_large_gaps() {
    let p = LinearBoundParams::new(0.0, 1e3 * PI + 0.1, 200).unwrap();
    let b = log_damping_bounds(&p);
    let limit = -2.0 * 200.0 * LN_2;
    assert!((b.lower() / limit - 1.0).abs() < 1e-4);
    assert!((b.upper() / limit - 1.0).abs() < 1e-4);
    assert!(matches!(b, LogDampingBounds::Bracket { caveat: true, .. }));
}

#[test]
fn zero_increment_is_constant_angle() {
    let p = LinearBoundParams::new(0.4, 0.0, 50).unwrap();
    match log_damping_bounds(&p) {
        LogDampingBounds::ConstantAngle { value } => {
            assert!((value - 50.0 * 0.4_f64.cos().powi(2).ln()).abs() < 1e-12)
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn engine_sums_within_bounds_plus_discretization_slack() {
    let gp = GammaParams::new(0.9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let k = rng.random_range(20..200usize);
        let dl = rng.random_range(0.1..3.0);
        let dmin = rng.random_range(0.0..0.05);
        let dmax = dmin + rng.random_range(0.1..3.0);
        let sched = linear_schedule(dmin, dmax, k).unwrap();
        let values: Vec<f64> = sched
            .steps()
            .iter()
            .map(|&dt| (dl * gp.s() * dt).cos().powi(2).ln())
            .collect();
        let sum: f64 = values.iter().sum();
        if !sum.is_finite() {
            continue;
        }
        let worst = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let p = LinearBoundParams::from_schedule(dl, gp.s(), dmin, dmax, k).unwrap();
        let b = log_damping_bounds(&p);
        assert!(b.lower() - 2.0 * worst <= sum && sum <= b.upper() + 2.0 * worst);
    }
}

#[test]
fn linear_mean_limits_and_minimizer() {
    let p = LinearBoundParams::new(0.0, 1e-12, 200).unwrap();
    assert!((arithmetic_mean_linear(&p) - 1.0).abs() < 1e-12);

    // Golden-section search on the a = 0 mean as a function of bK.
    let mean =
        |x: f64| arithmetic_mean_linear(&LinearBoundParams::new(0.0, x / 200.0, 200).unwrap());
    let (mut lo, mut hi) = (0.5 * PI, PI);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    while hi - lo > 1e-12 {
        let (x1, x2) = (hi - r * (hi - lo), lo + r * (hi - lo));
        if mean(x1) < mean(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let x = 0.5 * (lo + hi);
    assert!((x - linear_mean_minimizer()).abs() < 1e-6, "{x}");
    assert!((x / PI - 0.7151).abs() < 1e-4);
    // The often-quoted 3π/4 is a coarse reading of the same minimum.
    assert!((QUOTED_LINEAR_MEAN_MINIMIZER - x).abs() / x < 0.05);
}

#[test]
fn linear_mean_matches_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let k = 200;
        let a = rng.random_range(-1.0..1.0);
        let b = rng.random_range(0.0..0.1);
        let p = LinearBoundParams::new(a, b, k).unwrap();
        let direct: f64 = (1..=k)
            .map(|i| (a + b * i as f64).cos().powi(2))
            .sum::<f64>()
            / k as f64;
        let variation = 2.0 + 2.0 * b * k as f64 / PI;
        assert!((arithmetic_mean_linear(&p) - direct).abs() <= variation / k as f64);
    }
}

#[test]
fn exponential_mean_matches_quadrature_and_direct_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for &kb in &[0.25, 0.5, 1.0] {
        for _ in 0..30 {
            let k = rng.random_range(100..400usize);
            let beta = rng.random_range(1e-3..10.0 * PI);
            let alpha = beta + rng.random_range(0.0..1.0);
            let kappa = kb * k as f64;
            let p = ExpMeanParams::new(alpha, beta, kappa, kb).unwrap();
            let m = arithmetic_mean_exponential(&p);

            let phase = |t: f64| alpha - beta * (-(t - 1.0) / kappa).exp();
            let integral = common::integrate_panels(
                &|t: f64| phase(t).cos().powi(2),
                0.0,
                k as f64,
                1.0,
                1e-12,
            ) / k as f64;
            assert!(
                (m.mean - integral).abs() < 1e-9,
                "kb={kb} beta={beta}: {} vs {integral}",
                m.mean
            );

            let direct: f64 =
                (1..=k).map(|i| phase(i as f64).cos().powi(2)).sum::<f64>() / k as f64;
            assert!((m.mean - direct).abs() <= 5.0 / k as f64);
            assert!((m.amplitude.powi(2) - m.delta_s.powi(2) - m.delta_c.powi(2)).abs() < 1e-12);
        }
    }
}

#[test]
fn exponential_mean_limits() {
    let m = arithmetic_mean_exponential(&ExpMeanParams::new(1e5, 1e5, 200.0, 1.0).unwrap());
    assert!((m.mean - 0.5).abs() < 1e-3);
    // κ̄ → 0 collapses the schedule onto Δτ_max.
    let m = arithmetic_mean_exponential(&ExpMeanParams::new(1.1, 0.7, 200.0 * 1e-3, 1e-3).unwrap());
    assert!((m.mean - 1.1_f64.cos().powi(2)).abs() < 1e-2);
}

#[test]
fn step_and_time_estimates() {
    assert_eq!(required_steps(0.5, 1.0, StepEstimate::Limit).unwrap(), 0);
    assert_eq!(required_steps(0.5, 1e-6, StepEstimate::Limit).unwrap(), 10);
    let a = required_steps_real(0.2, 1e-3, StepEstimate::Limit).unwrap();
    let b = required_steps_real(0.2, 1e-3, StepEstimate::Cos2Bound).unwrap();
    assert!((b - 3.0 * a).abs() < 1e-12);

    let t = required_tau_schedule(1.0, 1.0, 0.5, 1e-6, TauEstimate::LinearExp).unwrap();
    assert!((t - 1e6_f64.ln() / (4.0 * LN_2)).abs() < 1e-12);
    assert!((t - 4.98).abs() < 5e-3);
    let tl = required_tau_schedule(0.3, 2.0, 0.1, 1e-4, TauEstimate::LinearExp).unwrap();
    let tc = required_tau_schedule(5.0, 2.0, 0.1, 1e-4, TauEstimate::Constant).unwrap();
    assert!((tc / tl - 2.0 * 0.3 / 5.0).abs() < 1e-12);
    assert_eq!(
        required_tau_schedule(1.0, 1.0, 0.5, 1.0, TauEstimate::LinearExp).unwrap(),
        0.0
    );
    assert!(required_tau_schedule(0.0, 1.0, 0.5, 1.0, TauEstimate::LinearExp).is_err());
}

#[test]
fn optimal_dtau_max_examples() {
    let v = optimal_dtau_max(1.0, 1.0, ScheduleKind::Linear, 0.0, None).unwrap();
    assert!((v - 0.62 * PI).abs() < 1e-15);
    let v = optimal_dtau_max(1.0, 1.0, ScheduleKind::Exponential, 0.0, Some((200, 1.0))).unwrap();
    assert!((v - 0.5 * PI / (1.0 - (1.0 / 200.0 - 1.0_f64).exp())).abs() < 1e-12);
    let s = exponential_schedule(0.0, v, 200, 1.0).unwrap();
    assert!((s.final_step() - 0.5 * PI).abs() < 1e-12);
    assert!(optimal_dtau_max(1.0, 1.0, ScheduleKind::Exponential, 0.0, None).is_err());
}

#[test]
fn validity_condition_matches_scan() {
    let gp = GammaParams::new(0.9).unwrap();
    let spec = Spectrum::from_eigenvalues(vec![0.0, 0.3, 1.0, 2.5, 4.0]).unwrap();
    let flagged: Vec<usize> = validity_condition(&spec, 0.0, &gp)
        .iter()
        .map(|v| v.0)
        .collect();
    assert_eq!(flagged, vec![1, 2, 3, 4]);

    let dtau = 1.0 / (2.0 * 4.0);
    let scan: Vec<usize> = (1..5)
        .filter(|&i| {
            let d = spec.eigenvalues()[i];
            ((-d * dtau * gp.s() + gp.phi()).sin() / 0.9).abs() >= 1.0 - 1e-12
        })
        .collect();
    let got: Vec<usize> = validity_condition(&spec, dtau, &gp)
        .iter()
        .map(|v| v.0)
        .collect();
    assert_eq!(got, scan);

    // Excitation at the sine node: no violation.
    let d = gp.phi() / (gp.s() * 0.5);
    let two = Spectrum::from_eigenvalues(vec![0.0, d]).unwrap();
    assert!(validity_condition(&two, 0.5, &gp).is_empty());
}

#[test]
fn constant_schedule_bound_holds_for_engine() {
    let gp = GammaParams::new(0.9).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = 0;
    while checked < 100 {
        let n = rng.random_range(2..8usize);
        let mut l: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..4.0)).collect();
        l.sort_by(f64::total_cmp);
        l[0] = 0.0;
        let spec = Spectrum::from_eigenvalues(l.clone()).unwrap();
        let (dmin, dmax) = match (spec.min_gap(), spec.max_gap()) {
            (Some(a), Some(b)) => (a, b),
            _ => continue,
        };
        let dtau = 1.0 / (2.0 * dmax);
        if !validity_condition(&spec, dtau, &gp).is_empty() {
            continue;
        }
        let w = InitialWeights::uniform(n).unwrap();
        let k = rng.random_range(1..40usize);
        let sched = constant_schedule(dtau, k).unwrap();
        let r = pite_lab::engine::run_pite(&spec, &w, &sched, &gp, &ShiftPolicy::unshifted(0.0))
            .unwrap();
        let bound = error_upper_bound_constant(w.ground(), &gp, dmin, dmax, k).unwrap();
        assert!(
            r.error_tilde <= bound * (1.0 + 1e-12),
            "{} > {bound}",
            r.error_tilde
        );
        checked += 1;
    }
    let b = error_upper_bound_constant(0.25, &gp, 0.0, 1.0, 10).unwrap();
    assert!((b - 3.0).abs() < 1e-12);
}

#[test]
fn cost_examples() {
    let c = cost_estimate(1.0, 0.5, 1e-6).unwrap();
    assert!((c - 10.0 / ((1.0 + 1e-6) * 0.5)).abs() < 1e-12);
    let c2 = cost_estimate(1.0, 0.25, 1e-6).unwrap();
    let k2 = required_steps(0.25, 1e-6, StepEstimate::Limit).unwrap() as f64;
    assert!((c2 - k2 / ((1.0 + 1e-6) * 0.25)).abs() < 1e-12);
    let a = required_steps_real(0.5, 1e-5, StepEstimate::Limit).unwrap();
    let b = required_steps_real(0.5, 1e-6, StepEstimate::Limit).unwrap();
    assert!((b - a - 10f64.ln() / (2.0 * LN_2)).abs() < 1e-12);
}

#[test]
fn mean_gap_examples() {
    let g = geometric_arithmetic_gap(&[0.3; 5]).unwrap();
    assert!((g.geometric - g.arithmetic).abs() < 1e-15);
    let g = geometric_arithmetic_gap(&[1.0, 0.0]).unwrap();
    assert_eq!((g.geometric, g.arithmetic), (0.0, 0.5));
}

proptest! {
    #[test]
    fn geometric_never_exceeds_arithmetic(
        dl in 0.0..10.0f64, dmax in 1e-3..3.0f64, k in 2usize..300, alpha in 0.0..=1.0f64
    ) {
        let gp = GammaParams::new(0.9).unwrap();
        let sched = linear_schedule(0.0, dmax, k).unwrap();
        let policy = ShiftPolicy::new(alpha, 0, 0.0).unwrap();
        let f2: Vec<f64> = sched
            .steps()
            .iter()
            .filter(|&&dt| dt > 0.0)
            .map(|&dt| step_factor(dl, energy_shift(&policy, &gp, dt).unwrap(), dt, &gp).powi(2).min(1.0))
            .collect();
        let g = geometric_arithmetic_gap(&f2).unwrap();
        prop_assert!(g.geometric <= g.arithmetic * (1.0 + 1e-12));
    }

    #[test]
    fn si_is_odd_and_cin_even(x in 0.0..500.0f64) {
        prop_assert_eq!(si(-x), -si(x));
        prop_assert_eq!(cin(-x), cin(x));
    }
}
