use crate::error::{PiteError, Result};

use super::special::{cin, si};

/// Parameters of the closed-form mean of `cos²` over an exponential schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpMeanParams {
    /// `α = s Δλ Δτ_max`.
    pub alpha: f64,
    /// `β = s Δλ (Δτ_max - Δτ_min)`.
    pub beta: f64,
    /// `κ = κ̄ K`.
    pub kappa: f64,
    pub kappa_bar: f64,
}

impl ExpMeanParams {
    pub fn new(alpha: f64, beta: f64, kappa: f64, kappa_bar: f64) -> Result<Self> {
        if !(beta >= 0.0 && alpha >= beta && alpha.is_finite()) {
            return Err(PiteError::invalid(format!(
                "need 0 <= beta <= alpha, got alpha = {alpha}, beta = {beta}"
            )));
        }
        if !(kappa > 0.0 && kappa_bar > 0.0 && kappa.is_finite() && kappa_bar.is_finite()) {
            return Err(PiteError::invalid(format!(
                "kappa and kappa_bar must be positive, got {kappa} and {kappa_bar}"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            kappa,
            kappa_bar,
        })
    }

    pub fn from_schedule(
        dlambda: f64,
        s: f64,
        dtau_min: f64,
        dtau_max: f64,
        steps: usize,
        kappa_bar: f64,
    ) -> Result<Self> {
        let scale = dlambda * s;
        Self::new(
            scale * dtau_max,
            scale * (dtau_max - dtau_min),
            kappa_bar * steps as f64,
            kappa_bar,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpMean {
    /// `Ĩ = 1/2 + (A/2) cos(2α - φ̄)`.
    pub mean: f64,
    /// `A = √(Δ_S² + Δ_C²)`.
    pub amplitude: f64,
    /// `φ̄`, with `cos φ̄ = Δ_C/A` and `sin φ̄ = Δ_S/A`.
    pub phase: f64,
    pub delta_s: f64,
    pub delta_c: f64,
}

/// Integral approximation of `(1/K) Σ_k cos²(s Δλ Δτ_k)` for an exponential
/// schedule. The phase is resolved on the full circle, since `Δ_S` can be
/// negative. A zero-width range (`β = 0`) gives `cos² α` exactly.
pub fn arithmetic_mean_exponential(p: &ExpMeanParams) -> ExpMean {
    if p.beta == 0.0 {
        let c = p.alpha.cos();
        return ExpMean {
            mean: c * c,
            amplitude: 1.0,
            phase: 0.0,
            delta_s: 0.0,
            delta_c: 1.0,
        };
    }
    let upper = 2.0 * p.beta * (1.0 / p.kappa).exp();
    let lower = 2.0 * p.beta * (1.0 / p.kappa - 1.0 / p.kappa_bar).exp();
    let delta_s = p.kappa_bar * (si(upper) - si(lower));
    // κ̄[Ci(u) - Ci(l)] with κ̄ ln(u/l) = 1 taken out exactly.
    let delta_c = 1.0 - p.kappa_bar * (cin(upper) - cin(lower));
    let amplitude = delta_s.hypot(delta_c);
    let phase = delta_s.atan2(delta_c);
    ExpMean {
        mean: 0.5 + 0.5 * amplitude * (2.0 * p.alpha - phase).cos(),
        amplitude,
        phase,
        delta_s,
        delta_c,
    }
}
