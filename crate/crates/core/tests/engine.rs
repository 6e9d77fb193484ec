mod common;

use pite_lab::engine::*;
use pite_lab::hamiltonians::Spectrum;
use pite_lab::schedules::{constant_schedule, exponential_schedule, linear_schedule, Schedule};
use proptest::prelude::*;

fn spectrum_strategy(max: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2..=max).prop_flat_map(|n| {
        (
            proptest::collection::vec(-3.0..3.0f64, n),
            proptest::collection::vec(0.01..1.0f64, n),
        )
            .prop_map(|(mut l, w)| {
                l.sort_by(f64::total_cmp);
                let sum: f64 = w.iter().sum();
                (l, w.into_iter().map(|x| x / sum).collect())
            })
    })
}

fn weights(w: &[f64]) -> InitialWeights {
    InitialWeights::normalized(w.to_vec()).unwrap()
}

/// Brute-force ε̃ and P_K from the per-step factors.
fn brute_force(l: &[f64], w: &[f64], steps: &[f64], gamma: f64, alpha: f64) -> (f64, f64) {
    let damp: Vec<f64> = l
        .iter()
        .map(|li| {
            steps
                .iter()
                .map(|&dt| common::direct_step_factor(li - l[0], dt, gamma, alpha, 0).powi(2))
                .product()
        })
        .collect();
    let num: f64 = (1..l.len()).map(|i| w[i] * damp[i]).sum();
    let pk: f64 = (0..l.len()).map(|i| w[i] * damp[i]).sum();
    (num / (w[0] * damp[0]), pk)
}

#[test]
fn single_eigenstate_full_shift() {
    let spec = Spectrum::from_eigenvalues(vec![0.7]).unwrap();
    let w = InitialWeights::uniform(1).unwrap();
    let sched = linear_schedule(0.01, 0.5, 20).unwrap();
    let gp = GammaParams::new(0.9).unwrap();
    let r = run_pite(&spec, &w, &sched, &gp, &ShiftPolicy::full(0.7)).unwrap();
    assert_eq!(r.error_tilde, 0.0);
    assert_eq!(r.total_success, 1.0);
    assert!(r.step_success.iter().all(|&p| p == 1.0));
}

#[test]
fn eight_level_random_spectrum_matches_brute_force() {
    let l = [-1.3, -0.9, -0.2, 0.1, 0.4, 1.1, 1.7, 2.6];
    let w = [0.05, 0.2, 0.1, 0.15, 0.1, 0.2, 0.1, 0.1];
    let sched = linear_schedule(0.2, 0.6, 5).unwrap();
    let gp = GammaParams::new(0.83).unwrap();
    let spec = Spectrum::from_eigenvalues(l.to_vec()).unwrap();
    let r = run_pite(&spec, &weights(&w), &sched, &gp, &ShiftPolicy::full(l[0])).unwrap();
    let (eps, pk) = brute_force(&l, &w, sched.steps(), 0.83, 1.0);
    assert!((r.error_tilde - eps).abs() < 1e-12 * eps.max(1.0));
    assert!((r.total_success - pk).abs() < 1e-12);
}

#[test]
fn two_level_constant_schedule_approaches_ground_factor() {
    let gp = GammaParams::new(0.9).unwrap();
    let spec = Spectrum::from_eigenvalues(vec![0.0, 1.0]).unwrap();
    let w = InitialWeights::uniform(2).unwrap();
    let sched = constant_schedule(0.3, 60).unwrap();
    let policy = ShiftPolicy::unshifted(0.0);
    let r = run_pite(&spec, &w, &sched, &gp, &policy).unwrap();
    let f1 = common::direct_step_factor(0.0, 0.3, 0.9, 0.0, 0);
    let f2 = common::direct_step_factor(1.0, 0.3, 0.9, 0.0, 0);
    for k in 1..=60 {
        // p_k = (f1^{2k} + f2^{2k}) / (f1^{2k-2} + f2^{2k-2})
        let num = f1.powi(2 * k) + f2.powi(2 * k);
        let den = f1.powi(2 * k - 2) + f2.powi(2 * k - 2);
        assert!((r.step_success[k as usize - 1] - num / den).abs() < 1e-12);
    }
    assert!((r.step_success[59] - f1 * f1).abs() < 1e-6);
    assert_eq!(
        success_monotonicity_check(&r, &sched),
        MonotonicityReport::Monotone
    );
}

#[test]
fn monotonicity_check_only_applies_to_constant_schedules() {
    let gp = GammaParams::new(0.9).unwrap();
    let spec = Spectrum::from_eigenvalues(vec![0.0, 1.0]).unwrap();
    let w = InitialWeights::uniform(2).unwrap();
    let sched = linear_schedule(0.1, 1.0, 10).unwrap();
    let r = run_pite(&spec, &w, &sched, &gp, &ShiftPolicy::full(0.0)).unwrap();
    assert_eq!(
        success_monotonicity_check(&r, &sched),
        MonotonicityReport::NotApplicable
    );
}

#[test]
fn approximate_evolution_converges_to_exact() {
    let l = vec![-1.0, -0.4, 0.3, 0.9];
    let w = vec![0.1, 0.3, 0.4, 0.2];
    let spec = Spectrum::from_eigenvalues(l.clone()).unwrap();
    let gp = GammaParams::new(0.6).unwrap();
    let tau = 1.5;
    let exact = exact_ite(&spec, &weights(&w), tau).unwrap();
    let mut last = f64::INFINITY;
    for p in 4..=10 {
        let k = 1usize << p;
        // f ≈ γ e^{-Δλ Δτ} for α = 0, so Δτ carries no factor of s here.
        let sched = constant_schedule(tau / k as f64, k).unwrap();
        let r = run_pite(
            &spec,
            &weights(&w),
            &sched,
            &gp,
            &ShiftPolicy::unshifted(l[0]),
        )
        .unwrap();
        let dev = r
            .final_weights
            .iter()
            .zip(&exact.weights)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(dev < last, "K={k}: {dev} !< {last}");
        last = dev;
    }
    assert!(last < 1e-3, "{last}");
}

#[test]
fn required_tau_round_trip() {
    let spec = Spectrum::from_eigenvalues(vec![0.0, 0.8]).unwrap();
    let w = InitialWeights::new(vec![0.3, 0.7]).unwrap();
    let tau = required_tau(0.02, 0.3, 0.7, 0.8).unwrap();
    let f = exact_ite(&spec, &w, tau).unwrap().fidelity;
    assert!((f - 0.98).abs() < 1e-6);
}

#[test]
fn gamma_point_nine_slope() {
    let gp = GammaParams::new(0.9).unwrap();
    let exact = 0.9 / 0.19_f64.sqrt();
    assert!((gp.s() - exact).abs() < 1e-15);
}

#[test]
fn alpha_sweep_endpoints_agree_with_runs() {
    let spec = Spectrum::from_eigenvalues(vec![-1.0, 0.0, 0.5, 2.0]).unwrap();
    let w = InitialWeights::uniform(4).unwrap();
    let gp = GammaParams::new(0.9).unwrap();
    let sched = exponential_schedule(1e-4 / gp.s(), 1.5 / gp.s(), 20, 1.0).unwrap();
    let base = ShiftPolicy::full(-1.0);
    let sweep = alpha_sweep(&spec, &w, &sched, &gp, &base, &[0.0, 0.5, 1.0]).unwrap();
    for (a, p) in &sweep {
        let r = run_pite(&spec, &w, &sched, &gp, &base.with_alpha(*a).unwrap()).unwrap();
        assert_eq!(*p, r.total_success);
    }
    assert!(sweep[2].1 > sweep[0].1);
}

#[test]
fn near_unit_gamma_follows_gamma_power() {
    // α = 0 with a zero-width spectrum: every factor is γ.
    let spec = Spectrum::from_eigenvalues(vec![0.0, 0.0]).unwrap();
    let w = InitialWeights::uniform(2).unwrap();
    let gp = GammaParams::new(0.999).unwrap();
    let sched = constant_schedule(0.01, 50).unwrap();
    let r = run_pite(&spec, &w, &sched, &gp, &ShiftPolicy::unshifted(0.0)).unwrap();
    assert!((r.ln_total_success - 100.0 * 0.999_f64.ln()).abs() < 1e-12);
}

fn any_schedule() -> impl Strategy<Value = Schedule> {
    prop_oneof![
        (0.0..0.5f64, 0.0..1.5f64, 2usize..40).prop_map(|(a, span, k)| linear_schedule(
            a,
            a + span,
            k
        )
        .unwrap()),
        (0.0..0.5f64, 1e-3..1.5f64, 2usize..40, 0.1..2.0f64)
            .prop_map(|(a, span, k, kb)| exponential_schedule(a, a + span, k, kb).unwrap()),
        (0.0..1.0f64, 1usize..40).prop_map(|(d, k)| constant_schedule(d, k).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn probabilities_are_conserved((l, w) in spectrum_strategy(10), sched in any_schedule(), gamma in 0.1..0.99f64) {
        prop_assume!((gamma - std::f64::consts::FRAC_1_SQRT_2).abs() > 1e-3);
        let gp = GammaParams::new(gamma).unwrap();
        let spec = Spectrum::from_eigenvalues(l.clone()).unwrap();
        let r = match run_pite(&spec, &weights(&w), &sched, &gp, &ShiftPolicy::full(l[0])) {
            Ok(r) => r,
            Err(_) => return Ok(()),
        };
        prop_assert!(r.step_success.iter().all(|p| (0.0..=1.0).contains(p)));
        let total: f64 = r.final_weights.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        // Full shift: the ground factor is 1, so P_K = (1 + ε̃) w_1.
        let expect = (1.0 + r.error_tilde) * w[0];
        prop_assert!((r.total_success - expect).abs() <= 1e-10 * expect);
    }

    #[test]
    fn full_shift_factor_is_cosine(dl in 0.0..20.0f64, dt in 1e-4..3.0f64, gamma in 0.1..0.99f64) {
        prop_assume!((gamma - std::f64::consts::FRAC_1_SQRT_2).abs() > 1e-3);
        let gp = GammaParams::new(gamma).unwrap();
        let e = energy_shift(&ShiftPolicy::full(0.0), &gp, dt).unwrap();
        let f = step_factor(dl, e, dt, &gp);
        prop_assert!((f - (dl * gp.s() * dt).cos()).abs() < 1e-12 * (1.0 + dl * gp.s() * dt));
    }

    #[test]
    fn matches_brute_force_product((l, w) in spectrum_strategy(8), k in 1usize..8, alpha in 0.0..=1.0f64) {
        let gp = GammaParams::new(0.9).unwrap();
        let sched = constant_schedule(0.37, k).unwrap();
        let spec = Spectrum::from_eigenvalues(l.clone()).unwrap();
        let policy = ShiftPolicy::new(alpha, 0, l[0]).unwrap();
        let r = run_pite(&spec, &weights(&w), &sched, &gp, &policy).unwrap();
        let (eps, pk) = brute_force(&l, &w, sched.steps(), 0.9, alpha);
        prop_assert!((r.error_tilde - eps).abs() <= 1e-10 * eps.max(1e-300) + 1e-300);
        prop_assert!((r.total_success - pk).abs() <= 1e-12 * pk.max(1e-300));
    }

    #[test]
    fn linear_and_log_accumulation_agree((l, w) in spectrum_strategy(6), sched in any_schedule()) {
        let gp = GammaParams::new(0.8).unwrap();
        let spec = Spectrum::from_eigenvalues(l.clone()).unwrap();
        let p = ShiftPolicy::full(l[0]);
        let a = run_pite_with(&spec, &weights(&w), &sched, &gp, &p, Accumulation::Log);
        let b = run_pite_with(&spec, &weights(&w), &sched, &gp, &p, Accumulation::Linear);
        if let (Ok(a), Ok(b)) = (a, b) {
            prop_assert!((a.ln_total_success - b.ln_total_success).abs() < 1e-9);
            for (x, y) in a.final_weights.iter().zip(&b.final_weights) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn error_inversion_round_trips(e in 0.0..1e6f64) {
        let back = tilde_from_error(error_from_tilde(e));
        prop_assert!((back - e).abs() <= 1e-12 * e.max(1.0));
    }

    #[test]
    fn constant_schedule_success_is_monotone((l, w) in spectrum_strategy(12), dt in 0.0..2.0f64, k in 2usize..60, alpha in 0.0..=1.0f64) {
        let gp = GammaParams::new(0.9).unwrap();
        let sched = constant_schedule(dt, k).unwrap();
        let spec = Spectrum::from_eigenvalues(l.clone()).unwrap();
        let policy = ShiftPolicy::new(alpha, 0, l[0]).unwrap();
        if let Ok(r) = run_pite(&spec, &weights(&w), &sched, &gp, &policy) {
            prop_assert_eq!(success_monotonicity_check(&r, &sched), MonotonicityReport::Monotone);
        }
    }
}
