use channels::{diagonalized_form, KrausChannel};
use qsim_core::{diagonalize_state, pauli_z_expectation, DensityMatrix, QubitSubset};

use crate::FridgeError;

/// Full density-matrix simulation of the settling protocol.
///
/// The ancilla starts maximally mixed (the scrambling step leaves single-qubit
/// marginals exactly there). Each step applies the state-specific
/// diagonalization and then the channel in its diagonalized frame. Returns
/// the polarization trajectory `z_0 = 0, z_1, ..., z_T`.
pub fn simulate_settling(ch: &KrausChannel, steps: usize) -> Result<Vec<f64>, FridgeError> {
    let diag = diagonalized_form(ch)?;
    let mut rho = DensityMatrix::maximally_mixed(1);
    let on = QubitSubset::singleton(0);
    let mut traj = Vec::with_capacity(steps + 1);
    traj.push(0.0);
    for _ in 0..steps {
        let (_, rotated) = diagonalize_state(&rho);
        rho = diag.apply(&rotated, on)?;
        traj.push(pauli_z_expectation(&rho, 0).expect("single qubit"));
    }
    Ok(traj)
}
