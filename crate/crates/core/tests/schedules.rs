mod common;

use pite_lab::schedules::*;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn small_linear_schedule() {
    let s = linear_schedule(0.0, 1.0, 3).unwrap();
    assert_eq!(s.steps(), &[0.0, 0.5, 1.0]);
    assert_eq!(s.cumulative(), 1.5);
}

#[test]
fn linear_sum_over_long_range() {
    let s = linear_schedule(1e-4, std::f64::consts::PI, 200).unwrap();
    let direct: f64 = common::linear_steps(1e-4, std::f64::consts::PI, 200)
        .iter()
        .sum();
    assert!(rel(s.cumulative(), direct) < 1e-12);
    assert!(rel(s.cumulative(), 200.0 * (std::f64::consts::PI + 1e-4) / 2.0) < 1e-12);
}

#[test]
fn exponential_endpoints_and_sum() {
    let s = exponential_schedule(0.0, 1.0, 200, 1.0).unwrap();
    assert_eq!(s.steps()[0], 0.0);
    assert!((s.final_step() - (1.0 - (-0.995_f64).exp())).abs() < 1e-15);
    assert!((exponential_final_step(0.0, 1.0, 200, 1.0) - s.final_step()).abs() < 1e-15);

    let s = exponential_schedule(1e-4, 2.0, 50, 0.5).unwrap();
    let direct: f64 = common::exponential_steps(1e-4, 2.0, 50, 0.5).iter().sum();
    assert!(rel(s.cumulative(), direct) < 1e-12);
    assert_eq!(s.kappa(), Some(25.0));
}

#[test]
fn constant_schedule_cases() {
    let s = constant_schedule(0.1, 10).unwrap();
    assert!((s.cumulative() - 1.0).abs() < 1e-15);
    assert!(constant_schedule(0.0, 4)
        .unwrap()
        .steps()
        .iter()
        .all(|&d| d == 0.0));
    assert!(constant_schedule(-0.1, 4).is_err());
    assert!(constant_schedule(0.1, 0).is_err());
}

#[test]
fn invalid_ranges_are_rejected() {
    assert!(linear_schedule(1.0, 0.5, 10).is_err());
    assert!(linear_schedule(0.0, 1.0, 1).is_err());
    assert!(exponential_schedule(0.0, 1.0, 10, 0.0).is_err());
    assert!(exponential_schedule(0.0, f64::INFINITY, 10, 1.0).is_err());
}

#[test]
fn truncation_keeps_prefix_and_sums_directly() {
    let s = linear_schedule(0.1, 0.9, 9).unwrap();
    let t = s.truncated(4).unwrap();
    assert_eq!(t.steps(), &s.steps()[..4]);
    assert!((t.cumulative() - t.summed()).abs() < 1e-15);
    assert!(s.truncated(0).is_err());
    assert!(s.truncated(10).is_err());
}

proptest! {
    #[test]
    fn linear_matches_definition(dmin in 0.0..2.0f64, span in 0.0..5.0f64, k in 2usize..400) {
        let s = linear_schedule(dmin, dmin + span, k).unwrap();
        let direct = common::linear_steps(dmin, dmin + span, k);
        for (a, b) in s.steps().iter().zip(&direct) {
            prop_assert!((a - b).abs() <= 1e-14 * b.abs().max(1.0));
        }
        prop_assert!(s.steps().windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(rel(s.cumulative(), direct.iter().sum()) < 1e-12);
    }

    #[test]
    fn exponential_matches_definition(
        dmin in 0.0..1.0f64, span in 1e-3..5.0f64, k in 2usize..400, kb in 0.05..4.0f64
    ) {
        let s = exponential_schedule(dmin, dmin + span, k, kb).unwrap();
        let direct = common::exponential_steps(dmin, dmin + span, k, kb);
        for (a, b) in s.steps().iter().zip(&direct) {
            prop_assert!((a - b).abs() <= 1e-14 * b.abs().max(1.0));
        }
        prop_assert!(s.steps().windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(s.final_step() <= dmin + span);
        prop_assert!(rel(s.cumulative(), direct.iter().sum()) < 1e-12);
    }
}
