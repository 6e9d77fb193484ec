//! Eigenbasis simulation of exact and first-order probabilistic imaginary-time
//! evolution.
//!
//! Every state is represented by its weights on the eigenbasis of `H`, so a run
//! over `K` steps costs `O(N·K)` regardless of how the Hamiltonian was built.

mod exact;
mod gamma;
mod run;
mod weights;

pub use exact::{exact_ite, required_tau, ExactEvolution};
pub use gamma::{GammaParams, SINGULARITY_TOLERANCE};
pub use run::{
    alpha_sweep, error_from_tilde, run_pite, run_pite_with, success_monotonicity_check,
    tilde_from_error, Accumulation, MonotonicityReport, RunResult,
};
pub use weights::{energy_shift, step_factor, InitialWeights, ShiftPolicy};

/// `ln Σ e^{x_i}`; `-∞` for an empty or all-`-∞` input.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let v: Vec<f64> = values.into_iter().collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    if m == f64::INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}
