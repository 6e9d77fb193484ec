//! Benchmark Hamiltonians, dense diagonalization and density-of-states binning.
//!
//! Two model families are provided: the periodic Heisenberg chain written with
//! Pauli matrices, and a single particle in an asymmetric double-well potential
//! on a periodic grid of `2^n` points. Both produce a dense real-symmetric
//! [`HamiltonianMatrix`] that [`diagonalize`] turns into an ascending
//! [`Spectrum`].

mod double_well;
mod heisenberg;
mod spectrum;

pub use double_well::{build_double_well, DoubleWellParams};
pub use heisenberg::{build_heisenberg_chain, HeisenbergModel, DEFAULT_MAX_SITES};
pub use spectrum::{diagonalize, diagonalize_values, dos_histogram, DosHistogram, Spectrum};

use nalgebra::DMatrix;

use crate::error::{PiteError, Result};

/// Absolute per-entry symmetry tolerance.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// Dense real-symmetric Hamiltonian on `2^n` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    entries: DMatrix<f64>,
}

impl HamiltonianMatrix {
    /// Wraps a dense matrix after checking it is square, of power-of-two
    /// dimension and symmetric to [`SYMMETRY_TOLERANCE`].
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = entries.shape();
        if rows != cols {
            return Err(PiteError::invalid(format!(
                "Hamiltonian must be square, got {rows}x{cols}"
            )));
        }
        if rows == 0 || !rows.is_power_of_two() {
            return Err(PiteError::invalid(format!(
                "Hamiltonian dimension {rows} is not a power of two"
            )));
        }
        if let Some(v) = entries.iter().find(|v| !v.is_finite()) {
            return Err(PiteError::invalid(format!(
                "Hamiltonian has a non-finite entry {v}"
            )));
        }
        for i in 0..rows {
            for j in (i + 1)..rows {
                let d = (entries[(i, j)] - entries[(j, i)]).abs();
                if d > SYMMETRY_TOLERANCE {
                    return Err(PiteError::invalid(format!(
                        "Hamiltonian is not symmetric at ({i}, {j}): deviation {d:e}"
                    )));
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    /// Number of qubits `n` with `dimension = 2^n`.
    pub fn qubits(&self) -> usize {
        self.dimension().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.entries
    }
}
