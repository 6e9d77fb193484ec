use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::HamiltonianMatrix;
use crate::error::{PiteError, Result};

const CONTINUITY_TOLERANCE: f64 = 1e-12;
const MAX_GRID_QUBITS: usize = 14;

/// Single particle in an asymmetric double well on the periodic cell `[0, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleWellParams {
    /// Grid has `2^n_qubits` points.
    pub n_qubits: usize,
    /// Cell length `L`.
    pub length: f64,
    /// Distance `d` between the two minima.
    pub separation: f64,
    /// Height `Δ` of the upper minimum above the lower one.
    pub offset: f64,
    /// Barrier strength `V0`.
    pub barrier: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl DoubleWellParams {
    /// Unit mass and `ħ = 1`.
    pub fn new(n_qubits: usize, length: f64, separation: f64, offset: f64, barrier: f64) -> Self {
        Self {
            n_qubits,
            length,
            separation,
            offset,
            barrier,
            mass: 1.0,
            hbar: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_qubits < 3 {
            return Err(PiteError::invalid(format!(
                "double well needs n_qubits >= 3, got {}",
                self.n_qubits
            )));
        }
        if self.n_qubits > MAX_GRID_QUBITS {
            return Err(PiteError::ResourceLimit {
                what: "n_qubits",
                requested: self.n_qubits,
                max: MAX_GRID_QUBITS,
            });
        }
        if !(self.separation > 0.0 && self.length > self.separation) {
            return Err(PiteError::invalid(format!(
                "double well needs L > d > 0, got L = {}, d = {}",
                self.length, self.separation
            )));
        }
        if !(self.barrier >= 0.0) || !self.offset.is_finite() {
            return Err(PiteError::invalid(format!(
                "double well needs V0 >= 0 and finite delta, got V0 = {}, delta = {}",
                self.barrier, self.offset
            )));
        }
        if !(self.mass > 0.0 && self.hbar > 0.0) {
            return Err(PiteError::invalid("mass and hbar must be positive"));
        }
        Ok(())
    }

    pub fn grid_points(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.grid_points() as f64
    }

    /// The three region boundaries `(L-d)/2`, `L/2`, `(L+d)/2`.
    pub fn boundaries(&self) -> [f64; 3] {
        let (l, d) = (self.length, self.separation);
        [(l - d) / 2.0, l / 2.0, (l + d) / 2.0]
    }

    fn piece(&self, region: usize, x: f64) -> f64 {
        let (l, d, delta, v0) = (self.length, self.separation, self.offset, self.barrier);
        let wave = 1.0 + (2.0 * PI / d * (x - l / 2.0)).cos();
        match region {
            0 => (x - l / 2.0 + d / 2.0).powi(2) / 2.0 + delta,
            1 => v0 / 2.0 * wave + delta,
            2 => (v0 + delta) / 2.0 * wave,
            _ => (x - l / 2.0 - d / 2.0).powi(2) / 2.0,
        }
    }

    /// Piecewise potential `V(x)`.
    pub fn potential(&self, x: f64) -> f64 {
        let [b0, b1, b2] = self.boundaries();
        let region = if x <= b0 {
            0
        } else if x <= b1 {
            1
        } else if x <= b2 {
            2
        } else {
            3
        };
        self.piece(region, x)
    }

    /// Both adjoining pieces must agree at every boundary.
    pub fn check_continuity(&self) -> Result<()> {
        for (i, b) in self.boundaries().into_iter().enumerate() {
            let left = self.piece(i, b);
            let right = self.piece(i + 1, b);
            if (left - right).abs() > CONTINUITY_TOLERANCE * left.abs().max(1.0) {
                return Err(PiteError::Internal(format!(
                    "double-well potential discontinuous at x = {b}: {left} vs {right}"
                )));
            }
        }
        Ok(())
    }
}

/// Kinetic term from the periodic spectral second derivative plus the
/// diagonal potential sampled at `x_j = j Δx`.
pub fn build_double_well(params: &DoubleWellParams) -> Result<HamiltonianMatrix> {
    params.validate()?;
    params.check_continuity()?;

    let n = params.grid_points();
    let dk = 2.0 * PI / params.length;
    let prefactor = params.hbar * params.hbar / (2.0 * params.mass);

    // T depends only on (j - l) mod N.
    let half = (n / 2) as i64;
    let kernel: Vec<f64> = (0..n)
        .map(|shift| {
            let sum: f64 = (-half..half)
                .map(|p| {
                    let k = dk * p as f64;
                    k * k * (2.0 * PI * (p * shift as i64) as f64 / n as f64).cos()
                })
                .sum();
            prefactor * sum / n as f64
        })
        .collect();

    let dx = params.spacing();
    let h = DMatrix::from_fn(n, n, |j, l| {
        let shift = (j + n - l) % n;
        let t = kernel[shift];
        if j == l {
            t + params.potential(j as f64 * dx)
        } else {
            // The kernel is even in the shift; average to keep exact symmetry.
            0.5 * (t + kernel[(l + n - j) % n])
        }
    });
    HamiltonianMatrix::new(h)
}
