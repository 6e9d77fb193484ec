use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{PiteError, Result};
use crate::hamiltonians::Spectrum;
use crate::schedules::{Schedule, ScheduleKind};

use super::{log_sum_exp, GammaParams, InitialWeights, ShiftPolicy};

/// Probabilities below this are treated as lost in linear accumulation.
const LINEAR_FLOOR: f64 = 1e-300;
const MONOTONICITY_SLACK: f64 = 1e-12;

/// How the per-eigenvalue damping products are accumulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Accumulation {
    /// Sum `ln f²`; never underflows.
    #[default]
    Log,
    /// Multiply `f²` directly; fails once every weighted product drops below 1e-300.
    Linear,
}

/// Outcome of a first-order PITE run, evaluated in the eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    /// `ln F̃_i = Σ_k ln f_k²(λ_i - E_k)` per eigenvalue.
    pub log_damping: Vec<f64>,
    pub ln_error_tilde: f64,
    /// `ε̃ = (1/w_1) Σ_{i≥2} w_i F̃_i / F̃_1`.
    pub error_tilde: f64,
    /// `ε = 2(1 - 1/√(1+ε̃))`.
    pub error: f64,
    /// Squared distance between the normalized PITE state and the exactly
    /// evolved state for the same total imaginary time.
    pub error_direct: f64,
    /// `P_K = Σ_i w_i F̃_i`.
    pub total_success: f64,
    pub ln_total_success: f64,
    /// `p_k = P_k / P_{k-1}`.
    pub step_success: Vec<f64>,
    /// `|⟨λ_1|Ψ_K⟩|²` of the normalized output state.
    pub fidelity: f64,
    /// `Σ_k Δτ_k`.
    pub cumulative_tau: f64,
    /// Normalized output weights `w_i F̃_i / P_K`.
    pub final_weights: Vec<f64>,
}

#[derive(Serialize)]
struct RunResultJson<'a> {
    error_tilde: f64,
    ln_error_tilde: f64,
    error: f64,
    error_direct: f64,
    total_success_prob: f64,
    fidelity: f64,
    cumulative_tau: f64,
    step_success: &'a [f64],
    #[serde(skip_serializing_if = "Option::is_none")]
    damping: Option<Vec<f64>>,
}

impl RunResult {
    /// `F̃_i` in linear space (may underflow to 0).
    pub fn damping(&self) -> Vec<f64> {
        self.log_damping.iter().map(|l| l.exp()).collect()
    }

    /// JSON object with the run summary; non-finite numbers become `null`.
    pub fn to_json(&self, include_damping: bool) -> serde_json::Value {
        serde_json::to_value(RunResultJson {
            error_tilde: self.error_tilde,
            ln_error_tilde: self.ln_error_tilde,
            error: self.error,
            error_direct: self.error_direct,
            total_success_prob: self.total_success,
            fidelity: self.fidelity,
            cumulative_tau: self.cumulative_tau,
            step_success: &self.step_success,
            damping: include_damping.then(|| self.damping()),
        })
        .expect("run summary is always serializable")
    }
}

/// `ε = 2(1 - 1/√(1+ε̃))`, evaluated without cancellation for small `ε̃`.
pub fn error_from_tilde(error_tilde: f64) -> f64 {
    if error_tilde.is_infinite() {
        return 2.0;
    }
    -2.0 * (-0.5 * error_tilde.ln_1p()).exp_m1()
}

/// `ε̃ = ε(4 - ε)/(2 - ε)²`.
pub fn tilde_from_error(error: f64) -> f64 {
    error * (4.0 - error) / ((2.0 - error) * (2.0 - error))
}

/// Runs with log-space accumulation.
pub fn run_pite(
    spec: &Spectrum,
    w: &InitialWeights,
    sched: &Schedule,
    gp: &GammaParams,
    policy: &ShiftPolicy,
) -> Result<RunResult> {
    run_pite_with(spec, w, sched, gp, policy, Accumulation::Log)
}

pub fn run_pite_with(
    spec: &Spectrum,
    w: &InitialWeights,
    sched: &Schedule,
    gp: &GammaParams,
    policy: &ShiftPolicy,
    mode: Accumulation,
) -> Result<RunResult> {
    let n = spec.len();
    if w.len() != n {
        return Err(PiteError::invalid(format!(
            "spectrum has {n} states but weights have {}",
            w.len()
        )));
    }
    if w.ground() == 0.0 {
        return Err(PiteError::DegenerateTarget);
    }

    // f = sin(-(λ-E)sΔτ + φ) = cos(y) with y = -(λ-λ_ref)sΔτ + c. Writing it
    // as a cosine keeps c exactly zero for the full shift on branch 0.
    let alpha = policy.alpha();
    let c =
        (1.0 - alpha) * gp.phi() + FRAC_PI_2 * (alpha * (2 * policy.branch_n() + 1) as f64 - 1.0);
    let rel: Vec<f64> = spec
        .eigenvalues()
        .iter()
        .map(|l| (l - policy.lambda1()) * gp.s())
        .collect();
    let ln_w: Vec<f64> = w.as_slice().iter().map(|x| x.ln()).collect();

    let mut log_damp = vec![0.0_f64; n];
    let mut lin_damp = vec![1.0_f64; n];
    let mut negative = vec![false; n];
    let mut step_success = Vec::with_capacity(sched.len());
    let mut ln_prev = 0.0_f64;

    for (k, &dt) in sched.steps().iter().enumerate() {
        for i in 0..n {
            let f = (c - rel[i] * dt).cos();
            if f < 0.0 {
                negative[i] = !negative[i];
            }
            match mode {
                Accumulation::Log => log_damp[i] += ln_f_squared(f, c - rel[i] * dt),
                Accumulation::Linear => lin_damp[i] *= f * f,
            }
        }
        let ln_pk = match mode {
            Accumulation::Log => log_sum_exp((0..n).map(|i| ln_w[i] + log_damp[i])),
            Accumulation::Linear => {
                let pk: f64 = (0..n).map(|i| w.as_slice()[i] * lin_damp[i]).sum();
                if (0..n).all(|i| w.as_slice()[i] * lin_damp[i] < LINEAR_FLOOR) {
                    return Err(PiteError::Underflow { step: k + 1 });
                }
                pk.ln()
            }
        };
        if ln_pk == f64::NEG_INFINITY {
            return Err(PiteError::PostselectionImpossible { p0: 0.0 });
        }
        step_success.push((ln_pk - ln_prev).exp().min(1.0));
        ln_prev = ln_pk;
    }

    if mode == Accumulation::Linear {
        log_damp = lin_damp.iter().map(|d| d.ln()).collect();
    }

    let ln_total = if sched.is_empty() { 0.0 } else { ln_prev };
    let ln_ratio = log_sum_exp((1..n).map(|i| ln_w[i] + log_damp[i]));
    let ln_error_tilde = if log_damp[0] == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        ln_ratio - ln_w[0] - log_damp[0]
    };
    let error_tilde = ln_error_tilde.exp();
    let final_weights: Vec<f64> = (0..n)
        .map(|i| (ln_w[i] + log_damp[i] - ln_total).exp())
        .collect();
    let cumulative_tau = sched.summed();

    Ok(RunResult {
        error_direct: direct_error(spec, &ln_w, &log_damp, &negative, cumulative_tau),
        fidelity: final_weights[0],
        error: error_from_tilde(error_tilde),
        log_damping: log_damp,
        ln_error_tilde,
        error_tilde,
        total_success: ln_total.exp(),
        ln_total_success: ln_total,
        step_success,
        cumulative_tau,
        final_weights,
    })
}

/// `ln cos²(y)` given `f = cos(y)`, accurate when `|f|` is close to 1.
fn ln_f_squared(f: f64, y: f64) -> f64 {
    if f.abs() < 0.5 {
        2.0 * f.abs().ln()
    } else {
        let s = y.sin();
        (-s * s).ln_1p()
    }
}

/// `‖â - b̂‖²` between the unit vectors `a_i ∝ √w_i e^{-Δλ_i τ}` and
/// `b_i ∝ √w_i F_K(λ_i)`, with the global sign fixed so that `b_1 ≥ 0`.
fn direct_error(
    spec: &Spectrum,
    ln_w: &[f64],
    log_damp: &[f64],
    negative: &[bool],
    tau: f64,
) -> f64 {
    let exc = spec.excitations();
    let ln_a: Vec<f64> = (0..exc.len())
        .map(|i| 0.5 * ln_w[i] - exc[i] * tau)
        .collect();
    let ln_b: Vec<f64> = (0..exc.len())
        .map(|i| 0.5 * (ln_w[i] + log_damp[i]))
        .collect();
    let norm_a = 0.5 * log_sum_exp(ln_a.iter().map(|x| 2.0 * x));
    let norm_b = 0.5 * log_sum_exp(ln_b.iter().map(|x| 2.0 * x));
    if norm_b == f64::NEG_INFINITY {
        return f64::NAN;
    }
    let flip = negative[0];
    (0..exc.len())
        .map(|i| {
            let a = (ln_a[i] - norm_a).exp();
            let mut b = (ln_b[i] - norm_b).exp();
            if negative[i] != flip {
                b = -b;
            }
            (a - b) * (a - b)
        })
        .sum()
}

/// Result of checking that the per-step success probability never decreases.
#[derive(Debug, Clone, PartialEq)]
pub enum MonotonicityReport {
    Monotone,
    /// First step `k` (1-based) with `p_{k+1} < p_k - 1e-12`.
    Violation {
        step: usize,
        p_k: f64,
        p_next: f64,
    },
    /// Monotonicity is only guaranteed for a constant schedule.
    NotApplicable,
}

pub fn success_monotonicity_check(result: &RunResult, sched: &Schedule) -> MonotonicityReport {
    if sched.kind() != ScheduleKind::Constant {
        return MonotonicityReport::NotApplicable;
    }
    result
        .step_success
        .windows(2)
        .position(|p| p[1] < p[0] - MONOTONICITY_SLACK)
        .map_or(MonotonicityReport::Monotone, |k| {
            MonotonicityReport::Violation {
                step: k + 1,
                p_k: result.step_success[k],
                p_next: result.step_success[k + 1],
            }
        })
}

/// `(α, P_K)` for each requested shift fraction, evaluated in parallel.
pub fn alpha_sweep(
    spec: &Spectrum,
    w: &InitialWeights,
    sched: &Schedule,
    gp: &GammaParams,
    policy: &ShiftPolicy,
    alphas: &[f64],
) -> Result<Vec<(f64, f64)>> {
    alphas
        .par_iter()
        .map(|&a| {
            let p = policy.with_alpha(a)?;
            run_pite(spec, w, sched, gp, &p).map(|r| (a, r.total_success))
        })
        .collect()
}
