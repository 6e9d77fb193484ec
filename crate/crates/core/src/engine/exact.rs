use crate::error::{PiteError, Result};
use crate::hamiltonians::Spectrum;

use super::{log_sum_exp, InitialWeights};

/// State after exact imaginary-time evolution `e^{-Hτ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactEvolution {
    /// Renormalized weights `∝ w_i e^{-2 λ_i τ}`.
    pub weights: Vec<f64>,
    /// `|⟨λ_1|Ψ(τ)⟩|²`.
    pub fidelity: f64,
}

/// Exact ITE in the eigenbasis. `tau = +∞` keeps only the ground manifold.
pub fn exact_ite(spec: &Spectrum, w: &InitialWeights, tau: f64) -> Result<ExactEvolution> {
    if spec.len() != w.len() {
        return Err(PiteError::invalid(format!(
            "spectrum has {} states but weights have {}",
            spec.len(),
            w.len()
        )));
    }
    if !(tau >= 0.0) {
        return Err(PiteError::invalid(format!("tau must be >= 0, got {tau}")));
    }
    let excitations = spec.excitations();
    let logs: Vec<f64> = if tau.is_infinite() {
        if w.ground() == 0.0 {
            return Err(PiteError::DegenerateTarget);
        }
        excitations
            .iter()
            .zip(w.as_slice())
            .map(|(d, wi)| {
                if *d == 0.0 {
                    wi.ln()
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect()
    } else {
        excitations
            .iter()
            .zip(w.as_slice())
            .map(|(d, wi)| wi.ln() - 2.0 * d * tau)
            .collect()
    };
    let norm = log_sum_exp(logs.iter().copied());
    let weights: Vec<f64> = logs.iter().map(|l| (l - norm).exp()).collect();
    Ok(ExactEvolution {
        fidelity: weights[0],
        weights,
    })
}

/// Imaginary time needed for fidelity `1 - δ` when only the first excited
/// state matters: `τ = ln[((1-δ)/δ)(|c_2|²/|c_1|²)] / (2Δλ_2)`.
pub fn required_tau(delta: f64, w1_sq: f64, w2_sq: f64, dlambda2: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(PiteError::invalid(format!(
            "tolerance delta must lie in (0, 1), got {delta}"
        )));
    }
    if !(w1_sq > 0.0 && w2_sq > 0.0) {
        return Err(PiteError::invalid("weights must be positive"));
    }
    if !(dlambda2 > 0.0) {
        return Err(PiteError::invalid(format!(
            "excitation energy must be positive, got {dlambda2}"
        )));
    }
    Ok(((1.0 - delta) / delta * (w2_sq / w1_sq)).ln() / (2.0 * dlambda2))
}
