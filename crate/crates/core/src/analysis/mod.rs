//! Closed-form error analysis: special functions, bounds and means of the
//! per-eigenvalue damping, and resource estimates.

mod estimates;
mod exponential;
mod linear;
mod special;

pub use estimates::{
    cost_estimate, error_upper_bound_constant, geometric_arithmetic_gap, optimal_dtau_max,
    required_steps, required_steps_real, required_tau_schedule, validity_condition, validity_ratio,
    MeanGap, StepEstimate, TauEstimate, EXPONENTIAL_FINAL_PHASE,
};
pub use exponential::{arithmetic_mean_exponential, ExpMean, ExpMeanParams};
pub use linear::{
    arithmetic_mean_linear, linear_mean_minimizer, log_damping_bounds, LinearBoundParams,
    LogDampingBounds, CAVEAT_PHASE, HALF_PERIOD_LOG_INTEGRAL, LINEAR_PRODUCT_MINIMIZER,
    QUOTED_LINEAR_MEAN_MINIMIZER,
};
pub use special::{ci, cin, si, EULER_GAMMA};
