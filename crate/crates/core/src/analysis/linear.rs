use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};

use crate::error::{PiteError, Result};

/// `∫₀^{π/2} ln sin x dx`.
pub const HALF_PERIOD_LOG_INTEGRAL: f64 = -FRAC_PI_2 * LN_2;

/// Per-step phase above which replacing the sum by an integral is unreliable.
pub const CAVEAT_PHASE: f64 = FRAC_PI_4;

/// Minimizer of the per-eigenvalue log damping over `Δλ·s·Δτ_max` quoted for
/// linear schedules, used for defaults.
pub const LINEAR_PRODUCT_MINIMIZER: f64 = 0.62 * PI;

/// Minimizer of the linear-schedule arithmetic mean as quoted in the
/// literature; the exact value is [`linear_mean_minimizer`].
pub const QUOTED_LINEAR_MEAN_MINIMIZER: f64 = 0.75 * PI;

/// Phase `a_i + b_i k` of the `k`-th linear step, `k = 1..K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearBoundParams {
    pub a: f64,
    pub b: f64,
    pub steps: usize,
}

impl LinearBoundParams {
    pub fn new(a: f64, b: f64, steps: usize) -> Result<Self> {
        if !(b >= 0.0 && b.is_finite() && a.is_finite()) {
            return Err(PiteError::invalid(format!(
                "need finite a and b >= 0, got a = {a}, b = {b}"
            )));
        }
        if steps < 2 {
            return Err(PiteError::invalid("linear bounds need K >= 2"));
        }
        Ok(Self { a, b, steps })
    }

    /// `a = Δλ s [Δτ_min - (Δτ_max-Δτ_min)/(K-1)]`, `b = Δλ s (Δτ_max-Δτ_min)/(K-1)`.
    pub fn from_schedule(
        dlambda: f64,
        s: f64,
        dtau_min: f64,
        dtau_max: f64,
        steps: usize,
    ) -> Result<Self> {
        if steps < 2 {
            return Err(PiteError::invalid("linear bounds need K >= 2"));
        }
        let inc = (dtau_max - dtau_min) / (steps - 1) as f64;
        Self::new(dlambda * s * (dtau_min - inc), dlambda * s * inc, steps)
    }

    fn k(&self) -> f64 {
        self.steps as f64
    }
}

/// Bracket on `G = ∫₀^K ln cos²(a + b k) dk`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogDampingBounds {
    Bracket {
        lower: f64,
        upper: f64,
        /// Set when `b > π/4`.
        caveat: bool,
    },
    /// `b = 0`: the integrand is constant and `G = K ln cos² a` exactly.
    ConstantAngle { value: f64 },
}

impl LogDampingBounds {
    pub fn lower(&self) -> f64 {
        match *self {
            Self::Bracket { lower, .. } => lower,
            Self::ConstantAngle { value } => value,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            Self::Bracket { upper, .. } => upper,
            Self::ConstantAngle { value } => value,
        }
    }
}

/// Counts the half periods of `ln cos²` that cover (lower) and fit inside
/// (upper) the phase interval `[a, a + bK]`; each contributes `2S/b`.
pub fn log_damping_bounds(p: &LinearBoundParams) -> LogDampingBounds {
    if p.b == 0.0 {
        let c = p.a.cos();
        return LogDampingBounds::ConstantAngle {
            value: p.k() * (c * c).ln(),
        };
    }
    let lo = p.a / FRAC_PI_2;
    let hi = (p.a + p.b * p.k()) / FRAC_PI_2;
    let unit = 2.0 * HALF_PERIOD_LOG_INTEGRAL / p.b;
    LogDampingBounds::Bracket {
        lower: unit * (hi.ceil() - lo.floor()),
        upper: unit * (hi.floor() - lo.ceil()),
        caveat: p.b > CAVEAT_PHASE,
    }
}

/// `Ĩ = 1/2 + [sin 2(a+bK) - sin 2a]/(4bK)`, written as
/// `1/2 + cos(2a+bK)·sin(bK)/(2bK)` so the `bK → 0` limit `cos² a` is exact.
pub fn arithmetic_mean_linear(p: &LinearBoundParams) -> f64 {
    let x = p.b * p.k();
    let sinc = if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    };
    0.5 + 0.5 * (2.0 * p.a + x).cos() * sinc
}

/// Exact minimizer `x*` of `1/2 + sin(2x)/(4x)`, the linear mean with `a = 0`
/// as a function of `x = Δλ s Δτ_max`; it solves `tan 2x = 2x`.
pub fn linear_mean_minimizer() -> f64 {
    // Newton on g(y) = sin y - y cos y, y = 2x, starting in (π, 3π/2).
    let mut y: f64 = 4.5;
    for _ in 0..50 {
        let g = y.sin() - y * y.cos();
        let dg = y * y.sin();
        let step = g / dg;
        y -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    y / 2.0
}
