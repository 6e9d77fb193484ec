//! Sine and cosine integrals.
//!
//! Power series below [`SERIES_CUTOFF`]; above it, `E1(ix)` from its continued
//! fraction (modified Lentz), which converges quickly for `|x| > 4`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::error::{PiteError, Result};

/// Euler–Mascheroni constant `γ_E`.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_CUTOFF: f64 = 4.0;
const MAX_TERMS: usize = 200;

/// `Si(x) = ∫₀ˣ sin t / t dt`. Odd in `x`.
pub fn si(x: f64) -> f64 {
    if x < 0.0 {
        return -si(-x);
    }
    if x <= SERIES_CUTOFF {
        si_series(x)
    } else {
        FRAC_PI_2 + e1_imaginary(x).im
    }
}

/// `Cin(x) = ∫₀ˣ (1 - cos t)/t dt`. Even in `x`.
pub fn cin(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_CUTOFF {
        cin_series(x)
    } else {
        EULER_GAMMA + x.ln() + e1_imaginary(x).re
    }
}

/// `Ci(x) = -∫ₓ^∞ cos t / t dt = γ_E + ln x - Cin(x)`, defined for `x > 0`.
pub fn ci(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(PiteError::Domain(format!(
            "Ci is defined for x > 0 only, got {x}"
        )));
    }
    Ok(if x <= SERIES_CUTOFF {
        EULER_GAMMA + x.ln() - cin_series(x)
    } else {
        -e1_imaginary(x).re
    })
}

fn si_series(x: f64) -> f64 {
    // term_n = (-1)^n x^{2n+1} / (2n+1)!
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..MAX_TERMS {
        let m = (2 * n) as f64;
        term *= -x2 / (m * (m + 1.0));
        let add = term / (m + 1.0);
        sum += add;
        if add.abs() <= f64::EPSILON * sum.abs() {
            break;
        }
    }
    sum
}

fn cin_series(x: f64) -> f64 {
    // term_n = (-1)^{n+1} x^{2n} / (2n)!
    let x2 = x * x;
    let mut term = -1.0;
    let mut sum = 0.0;
    for n in 1..MAX_TERMS {
        let m = (2 * n) as f64;
        term *= -x2 / ((m - 1.0) * m);
        let add = term / m;
        sum += add;
        if add.abs() <= f64::EPSILON * sum.abs() {
            break;
        }
    }
    sum
}

/// `E1(ix)` for `x > 0`, so that `Ci = -Re E1(ix)` and `Si = π/2 + Im E1(ix)`.
fn e1_imaginary(x: f64) -> Complex64 {
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 1..=MAX_TERMS * 10 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < f64::EPSILON {
            break;
        }
    }
    h * Complex64::new(x.cos(), -x.sin())
}
