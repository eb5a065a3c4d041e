use num_complex::Complex64;

use crate::matrix::{bit_pos, is_finite, partial_trace_mat, CMat};
use crate::{c64, tol, CoreError, QubitSubset};

/// A density matrix on `n` qubits: Hermitian, unit trace, positive
/// semidefinite within the global tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    mat: CMat,
}

impl DensityMatrix {
    /// Validates all state invariants.
    pub fn new(mat: CMat) -> Result<Self, CoreError> {
        let dim = mat.nrows();
        if mat.ncols() != dim {
            return Err(CoreError::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if !dim.is_power_of_two() {
            return Err(CoreError::NotPowerOfTwo { dim });
        }
        if !is_finite(&mat) {
            return Err(CoreError::NonFinite);
        }
        let herm_dev = (&mat - mat.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm_dev > tol::HERM {
            return Err(CoreError::InvalidState(format!(
                "hermiticity deviation {herm_dev:.3e}"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(CoreError::InvalidState(format!("trace {tr}")));
        }
        let eigs = mat.clone().symmetric_eigen().eigenvalues;
        let min_eig = eigs.iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < -tol::PSD {
            return Err(CoreError::InvalidState(format!(
                "minimum eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            mat,
        })
    }

    /// Wraps a matrix that is known valid by construction (hot paths only).
    pub fn new_unchecked(mat: CMat) -> Self {
        debug_assert!(mat.nrows() == mat.ncols() && mat.nrows().is_power_of_two());
        Self {
            n_qubits: mat.nrows().trailing_zeros() as usize,
            mat,
        }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let m = CMat::identity(dim, dim) / c64(dim as f64, 0.0);
        Self { n_qubits, mat: m }
    }

    /// Computational basis state `|index><index|`.
    pub fn basis_state(n_qubits: usize, index: usize) -> Self {
        let dim = 1usize << n_qubits;
        assert!(index < dim);
        let mut m = CMat::zeros(dim, dim);
        m[(index, index)] = Complex64::ONE;
        Self { n_qubits, mat: m }
    }

    /// Single-qubit state `(I + r . sigma)/2` from a Bloch vector with |r| <= 1.
    pub fn from_bloch(r: [f64; 3]) -> Result<Self, CoreError> {
        let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
        if norm > 1.0 + tol::PSD {
            return Err(CoreError::InvalidState(format!("Bloch norm {norm}")));
        }
        let m = CMat::from_row_slice(
            2,
            2,
            &[
                c64(0.5 * (1.0 + r[2]), 0.0),
                c64(0.5 * r[0], -0.5 * r[1]),
                c64(0.5 * r[0], 0.5 * r[1]),
                c64(0.5 * (1.0 - r[2]), 0.0),
            ],
        );
        Ok(Self { n_qubits: 1, mat: m })
    }

    /// Diagonal single-qubit state with polarization `z`.
    pub fn polarized(z: f64) -> Result<Self, CoreError> {
        Self::from_bloch([0.0, 0.0, z])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }

    /// Bloch vector of a single-qubit state.
    pub fn bloch(&self) -> [f64; 3] {
        assert_eq!(self.n_qubits, 1);
        let m = &self.mat;
        [
            2.0 * m[(0, 1)].re,
            -2.0 * m[(0, 1)].im,
            (m[(0, 0)] - m[(1, 1)]).re,
        ]
    }

    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).trace().re
    }

    /// `Tr_{F \ keep}(rho)`; trace and Hermiticity are preserved exactly.
    pub fn partial_trace(&self, keep: QubitSubset) -> Result<DensityMatrix, CoreError> {
        keep.check_in(self.n_qubits)?;
        let out = partial_trace_mat(&self.mat, self.n_qubits, keep.bits());
        Ok(DensityMatrix::new_unchecked(out))
    }
}

/// `Tr((Z on qubit) rho)`, in `[-1, 1]`.
pub fn pauli_z_expectation(rho: &DensityMatrix, qubit: usize) -> Result<f64, CoreError> {
    let n = rho.n_qubits();
    if qubit >= n {
        return Err(CoreError::QubitOutOfRange { index: qubit, n });
    }
    let pos = bit_pos(qubit, n);
    let mut acc = 0.0;
    for i in 0..rho.dim() {
        let sign = if i >> pos & 1 == 0 { 1.0 } else { -1.0 };
        acc += sign * rho.mat()[(i, i)].re;
    }
    Ok(acc)
}

/// State-specific diagonalizing rotation for a single-qubit state.
///
/// Returns `(u, rho_diag)` with `rho_diag = u rho u^dag` diagonal and the
/// eigenvalues ordered so that `rho_diag[0,0] >= rho_diag[1,1]`, i.e. the
/// resulting polarization equals the Bloch-vector length and is never
/// negative. A degenerate input (`rho = I/2`) returns the identity rotation.
pub fn diagonalize_state(rho: &DensityMatrix) -> (CMat, DensityMatrix) {
    assert_eq!(rho.n_qubits(), 1, "diagonalize_state is single-qubit only");
    let r = rho.bloch();
    let len = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if len < 1e-15 {
        return (CMat::identity(2, 2), rho.clone());
    }
    let theta = (r[2] / len).clamp(-1.0, 1.0).acos();
    let phi = r[1].atan2(r[0]);
    let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let eip = c64(phi.cos(), phi.sin());
    // rows are <psi| and <psi_perp| for the +|r| and -|r| Bloch eigenvectors
    let u = CMat::from_row_slice(
        2,
        2,
        &[
            c64(ct, 0.0),
            eip.conj() * c64(st, 0.0),
            -eip * c64(st, 0.0),
            c64(ct, 0.0),
        ],
    );
    let diag = DensityMatrix::polarized(len).expect("|r| <= 1");
    (u, diag)
}
