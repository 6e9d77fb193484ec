use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::engine::GammaParams;
use crate::error::{PiteError, Result};
use crate::hamiltonians::Spectrum;
use crate::schedules::ScheduleKind;

use super::linear::LINEAR_PRODUCT_MINIMIZER;

/// Tolerance on `|sin(·)/γ| = 1` so that the `Δτ = 0` boundary is flagged.
const VALIDITY_TOLERANCE: f64 = 1e-12;

/// Phase `s Δλ Δτ_K` targeted by the final exponential step.
pub const EXPONENTIAL_FINAL_PHASE: f64 = 0.5 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepEstimate {
    /// Every excited state damped by the large-gap limit `4^{-K}`.
    Limit,
    /// Only a third of the steps assumed to reach `cos² ≤ 1/4`.
    Cos2Bound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauEstimate {
    LinearExp,
    Constant,
}

fn log_target(w1_sq: f64, eps_tilde: f64) -> Result<f64> {
    if !(w1_sq > 0.0 && w1_sq.is_finite()) {
        return Err(PiteError::invalid(format!(
            "ground weight must be positive, got {w1_sq}"
        )));
    }
    if !(eps_tilde > 0.0) {
        return Err(PiteError::invalid(format!(
            "target error must be positive, got {eps_tilde}"
        )));
    }
    Ok(((1.0 - w1_sq) / (eps_tilde * w1_sq)).ln())
}

/// `c·ln[(1-w₁²)/(ε̃ w₁²)]` before rounding, clamped at 0.
pub fn required_steps_real(w1_sq: f64, eps_tilde: f64, variant: StepEstimate) -> Result<f64> {
    if w1_sq >= 1.0 {
        return Ok(0.0);
    }
    let c = match variant {
        StepEstimate::Limit => 1.0 / (2.0 * LN_2),
        StepEstimate::Cos2Bound => 3.0 / (2.0 * LN_2),
    };
    Ok((c * log_target(w1_sq, eps_tilde)?).max(0.0))
}

/// Steps needed to reach `ε̃`, rounded up; 0 when the ground weight is already 1.
pub fn required_steps(w1_sq: f64, eps_tilde: f64, variant: StepEstimate) -> Result<u64> {
    // Guard against 9.9999999999 rounding up to 11 from representation error.
    let k = required_steps_real(w1_sq, eps_tilde, variant)?;
    Ok((k - 1e-9).ceil().max(0.0) as u64)
}

/// Total imaginary time for the target error.
///
/// `LinearExp` uses `ln(·)/(4 s Δλ_min ln 2)`; `Constant` uses
/// `ln(·)/(4 Δλ_max ln 2)` and `gap` must then be `Δλ_max`.
pub fn required_tau_schedule(
    gap: f64,
    s: f64,
    w1_sq: f64,
    eps_tilde: f64,
    variant: TauEstimate,
) -> Result<f64> {
    if !(gap > 0.0) {
        return Err(PiteError::invalid(format!(
            "excitation energy must be positive, got {gap}"
        )));
    }
    if w1_sq >= 1.0 {
        return Ok(0.0);
    }
    let rate = match variant {
        TauEstimate::LinearExp => {
            if !(s > 0.0) {
                return Err(PiteError::invalid(format!("s must be positive, got {s}")));
            }
            s * gap
        }
        TauEstimate::Constant => gap,
    };
    Ok((log_target(w1_sq, eps_tilde)? / (4.0 * rate * LN_2)).max(0.0))
}

/// Recommended `Δτ_max`: `0.62π/(sΔλ_min)` for linear schedules; for
/// exponential schedules the value whose final step is `0.5π/(sΔλ_min)`.
pub fn optimal_dtau_max(
    dlambda_min: f64,
    s: f64,
    kind: ScheduleKind,
    dtau_min: f64,
    exponential: Option<(usize, f64)>,
) -> Result<f64> {
    if !(dlambda_min > 0.0 && s > 0.0) {
        return Err(PiteError::invalid(format!(
            "need positive gap and s, got {dlambda_min} and {s}"
        )));
    }
    match kind {
        ScheduleKind::Linear | ScheduleKind::Constant => {
            Ok(LINEAR_PRODUCT_MINIMIZER / (s * dlambda_min))
        }
        ScheduleKind::Exponential => {
            let (steps, kappa_bar) = exponential
                .ok_or_else(|| PiteError::invalid("exponential Δτ_max needs K and kappa_bar"))?;
            if steps == 0 || !(kappa_bar > 0.0) {
                return Err(PiteError::invalid(format!(
                    "need K >= 1 and kappa_bar > 0, got {steps} and {kappa_bar}"
                )));
            }
            let target = EXPONENTIAL_FINAL_PHASE / (s * dlambda_min);
            let decay = ((1.0 / steps as f64 - 1.0) / kappa_bar).exp();
            if decay >= 1.0 {
                // K = 1: the only step is Δτ_min.
                return Err(PiteError::invalid(
                    "a single exponential step never leaves dtau_min",
                ));
            }
            Ok((target - decay * dtau_min) / (1.0 - decay))
        }
    }
}

/// Excited states (index `i ≥ 1`) with `|sin(-Δλ_i Δτ s + φ)/γ| ≥ 1`, i.e.
/// those not damped relative to the ground state by a constant step `Δτ`.
pub fn validity_condition(spec: &Spectrum, dtau: f64, gp: &GammaParams) -> Vec<(usize, f64)> {
    spec.excitations()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &d)| validity_ratio(d, dtau, gp).abs() >= 1.0 - VALIDITY_TOLERANCE)
        .map(|(i, _)| (i, spec.eigenvalues()[i]))
        .collect()
}

/// `(1/γ) sin(-Δλ Δτ s + φ)`.
pub fn validity_ratio(dlambda: f64, dtau: f64, gp: &GammaParams) -> f64 {
    (-dlambda * dtau * gp.s() + gp.phi()).sin() / gp.gamma()
}

/// Upper bound on `ε̃` for a constant schedule with `Δτ = 1/(2Δλ_max)`.
pub fn error_upper_bound_constant(
    w1_sq: f64,
    gp: &GammaParams,
    dlambda_min: f64,
    dlambda_max: f64,
    steps: usize,
) -> Result<f64> {
    if !(w1_sq > 0.0 && w1_sq <= 1.0) {
        return Err(PiteError::invalid(format!(
            "ground weight must lie in (0, 1], got {w1_sq}"
        )));
    }
    if !(dlambda_max > 0.0 && dlambda_min >= 0.0) {
        return Err(PiteError::invalid(
            "need dlambda_max > 0 and dlambda_min >= 0",
        ));
    }
    let ratio = validity_ratio(dlambda_min, 1.0 / (2.0 * dlambda_max), gp).abs();
    Ok((1.0 - w1_sq) / w1_sq * ratio.max(0.5).powi(2 * steps as i32))
}

/// `d·K/P_K` with `K` from the large-gap step estimate and `P_K = (1+ε̃)w₁²`.
pub fn cost_estimate(d_pite: f64, w1_sq: f64, eps_tilde: f64) -> Result<f64> {
    if !(d_pite > 0.0) {
        return Err(PiteError::invalid(format!(
            "circuit depth must be positive, got {d_pite}"
        )));
    }
    let k = required_steps(w1_sq, eps_tilde, StepEstimate::Limit)? as f64;
    Ok(d_pite * k / ((1.0 + eps_tilde) * w1_sq))
}

/// Geometric and arithmetic means of values in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanGap {
    pub geometric: f64,
    pub ln_geometric: f64,
    pub arithmetic: f64,
}

pub fn geometric_arithmetic_gap(values: &[f64]) -> Result<MeanGap> {
    if values.is_empty() {
        return Err(PiteError::invalid("no values to average"));
    }
    if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(PiteError::invalid(format!("value {v} outside [0, 1]")));
    }
    let n = values.len() as f64;
    let ln_geometric = values.iter().map(|v| v.ln()).sum::<f64>() / n;
    Ok(MeanGap {
        geometric: ln_geometric.exp(),
        ln_geometric,
        arithmetic: values.iter().sum::<f64>() / n,
    })
}
