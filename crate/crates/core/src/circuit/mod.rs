//! Statevector cross-check of a single PITE step.
//!
//! The ancilla is the most significant qubit: amplitude index `a·N + r` holds
//! ancilla state `a` and register basis state `r`, so every operator splits
//! into four contiguous `N × N` blocks and the ancilla-`|0⟩` block is the
//! top-left one.

mod sampling;
mod unitary;

pub use sampling::{sample_trajectories, ShotRecord, TrajectoryStats};
pub use unitary::{
    apply_postselect, build_approx_step_circuit, build_exact_block_unitary, StateVector,
    StepUnitary, MAX_CIRCUIT_QUBITS,
};
