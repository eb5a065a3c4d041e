//! Dense complex linear algebra, quantum-state containers, Haar sampling,
//! partial traces and norms. Everything else in the workspace builds on the
//! primitives defined here.
//!
//! Conventions used throughout:
//! * qubit index 0 is the **most significant** tensor factor, so the basis
//!   index of `|q0 q1 ... q(n-1)>` is the integer with q0 in the top bit;
//! * all states are `f64`-precision dense matrices;
//! * tolerances are fixed globally in [`tol`].

mod matrix;
mod rng;
mod state;
mod subset;

pub use matrix::{
    apply_kraus_on_subset, apply_on_subset, conjugate_on_subset, hs_norm_sq, is_finite, kron,
    left_mul_on_subset, partial_trace_mat, right_mul_adj_on_subset, trace_norm, CMat, MAX_AXIS_DIM,
};
pub use rng::{ginibre, haar_unitary, haar_unitary_with, RngStream};
pub use state::{diagonalize_state, pauli_z_expectation, DensityMatrix};
pub use subset::QubitSubset;

use num_complex::Complex64;

/// Global numerical tolerances.
pub mod tol {
    /// Hermiticity tolerance for density matrices.
    pub const HERM: f64 = 1e-10;
    /// Trace tolerance for density matrices.
    pub const TRACE: f64 = 1e-10;
    /// Positive-semidefiniteness slack for density matrices.
    pub const PSD: f64 = 1e-9;
    /// Unitarity tolerance for sampled/constructed unitaries.
    pub const UNIT: f64 = 1e-10;
}

/// Shorthand for `Complex64::new`.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Errors produced by the core containers and operations.
#[derive(Debug, Clone, thiserror::Error)]
pub enum CoreError {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("dimension {dim} is not a power of two")]
    NotPowerOfTwo { dim: usize },
    #[error("kron output would exceed {max} entries per axis", max = MAX_AXIS_DIM)]
    DimensionOverflow,
    #[error("not a valid density matrix: {0}")]
    InvalidState(String),
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("subset {subset:#x} is not contained in the full set of {n} qubits")]
    NotASubset { subset: u32, n: usize },
}

/// 2x2 Pauli and identity matrices.
pub mod pauli {
    use super::{c64, CMat};

    pub fn id() -> CMat {
        CMat::identity(2, 2)
    }
    pub fn x() -> CMat {
        CMat::from_row_slice(2, 2, &[c64(0., 0.), c64(1., 0.), c64(1., 0.), c64(0., 0.)])
    }
    pub fn y() -> CMat {
        CMat::from_row_slice(2, 2, &[c64(0., 0.), c64(0., -1.), c64(0., 1.), c64(0., 0.)])
    }
    pub fn z() -> CMat {
        CMat::from_row_slice(2, 2, &[c64(1., 0.), c64(0., 0.), c64(0., 0.), c64(-1., 0.)])
    }
}
