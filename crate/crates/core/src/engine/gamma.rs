use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use serde::Serialize;

use crate::error::{PiteError, Result};

/// Distance from `1/√2` inside which `γ` is rejected.
pub const SINGULARITY_TOLERANCE: f64 = 1e-9;

/// Coefficients of the first-order step derived from a single `γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaParams {
    gamma: f64,
    theta: f64,
    s: f64,
    phi: f64,
    sign_kappa: i8,
}

impl GammaParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(PiteError::invalid(format!(
                "gamma must lie in (0, 1), got {gamma}"
            )));
        }
        if (gamma - FRAC_1_SQRT_2).abs() <= SINGULARITY_TOLERANCE {
            return Err(PiteError::Singularity {
                gamma,
                tolerance: SINGULARITY_TOLERANCE,
            });
        }
        let co = (1.0 - gamma * gamma).sqrt();
        let sign_kappa: i8 = if gamma > FRAC_1_SQRT_2 { 1 } else { -1 };
        let theta = f64::from(sign_kappa) * ((gamma + co) * FRAC_1_SQRT_2).min(1.0).acos();
        let s = gamma / co;
        Ok(Self {
            gamma,
            theta,
            s,
            phi: gamma.asin(),
            sign_kappa,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `θ = κ·arccos[(γ + √(1-γ²))/√2]`, equal to `φ - π/4`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `s = γ/√(1-γ²) = tan φ`.
    pub fn s(&self) -> f64 {
        self.s
    }

    /// `φ = arctan s = arcsin γ`.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `sgn(γ - 1/√2)`.
    pub fn sign_kappa(&self) -> i8 {
        self.sign_kappa
    }

    /// `arctan(s) - (π/2)(2n+1)`: the bracket of the constant energy shift.
    pub fn shift_bracket(&self, branch_n: i64) -> f64 {
        self.phi - FRAC_PI_2 * (2 * branch_n + 1) as f64
    }
}
