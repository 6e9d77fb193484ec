use crate::error::{PiteError, Result};

use super::GammaParams;

const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Probabilities `|c_i|²` aligned with the spectrum order.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialWeights {
    weights: Vec<f64>,
}

impl InitialWeights {
    /// Accepts weights that are nonnegative and already sum to 1 (to 1e-12).
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        Self::check_entries(&weights)?;
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(PiteError::invalid(format!(
                "initial weights sum to {sum}, not 1"
            )));
        }
        Ok(Self { weights })
    }

    /// Rescales nonnegative weights with a positive sum.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        Self::check_entries(&weights)?;
        let sum: f64 = weights.iter().sum();
        if !(sum > 0.0) {
            return Err(PiteError::invalid("initial weights sum to zero"));
        }
        Ok(Self {
            weights: weights.into_iter().map(|w| w / sum).collect(),
        })
    }

    /// Equal weight `1/N` on every eigenstate.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(PiteError::invalid("uniform weights need n >= 1"));
        }
        Ok(Self {
            weights: vec![1.0 / n as f64; n],
        })
    }

    fn check_entries(weights: &[f64]) -> Result<()> {
        if weights.is_empty() {
            return Err(PiteError::invalid("initial weights are empty"));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
        {
            return Err(PiteError::invalid(format!(
                "initial weight {i} is {w}; weights must be finite and nonnegative"
            )));
        }
        Ok(())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Ground-state weight `|c_1|²`.
    pub fn ground(&self) -> f64 {
        self.weights[0]
    }
}

/// How far the per-step energy origin is moved towards the optimal shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftPolicy {
    alpha: f64,
    branch_n: i64,
    lambda1: f64,
}

impl ShiftPolicy {
    /// `alpha ∈ [0, 1]`; `lambda1` is the (possibly estimated) ground energy.
    pub fn new(alpha: f64, branch_n: i64, lambda1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(PiteError::invalid(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        if !lambda1.is_finite() {
            return Err(PiteError::invalid("lambda1 must be finite"));
        }
        Ok(Self {
            alpha,
            branch_n,
            lambda1,
        })
    }

    /// Full shift (`α = 1`) on branch `n = 0`.
    pub fn full(lambda1: f64) -> Self {
        Self {
            alpha: 1.0,
            branch_n: 0,
            lambda1,
        }
    }

    /// No shift beyond `λ_1` (`α = 0`).
    pub fn unshifted(lambda1: f64) -> Self {
        Self {
            alpha: 0.0,
            branch_n: 0,
            lambda1,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn branch_n(&self) -> i64 {
        self.branch_n
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.branch_n, self.lambda1)
    }

    /// `(λ_1 - E_k)·s·Δτ_k`, which does not depend on the step.
    pub(crate) fn phase_offset(&self, gp: &GammaParams) -> f64 {
        self.alpha * gp.shift_bracket(self.branch_n)
    }
}

/// `E_k = λ_1 - α/(Δτ_k s)·[arctan s - (π/2)(2n+1)]`.
pub fn energy_shift(policy: &ShiftPolicy, gp: &GammaParams, dtau: f64) -> Result<f64> {
    if !(dtau > 0.0) {
        return Err(PiteError::invalid(format!(
            "energy shift needs dtau > 0, got {dtau}"
        )));
    }
    Ok(policy.lambda1 - policy.phase_offset(gp) / (dtau * gp.s()))
}

/// `f = sin(-(λ - E)·s·Δτ + φ)`.
pub fn step_factor(lambda: f64, energy: f64, dtau: f64, gp: &GammaParams) -> f64 {
    (-(lambda - energy) * gp.s() * dtau + gp.phi()).sin()
}
