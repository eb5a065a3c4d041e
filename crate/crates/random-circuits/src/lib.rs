//! The average-case calculus: exact Haar-averaged evolution of marginal
//! Hilbert-Schmidt distances under noisy gates, the two-qubit special-case
//! rules with their log-depth lower bound and linear-depth upper bound, the
//! all-to-all transfer matrix, and Monte Carlo verification of all of them.

mod alltoall;
mod arch;
mod mc;
mod subset;
mod two_qubit;

pub use alltoall::{
    alltoall_ab, alltoall_bound, alltoall_coeffs, predicted_second_moment, AllToAllCoeffs,
};
pub use arch::{ArchKind, Architecture, ArchitectureSpec};
pub use mc::{
    bitstring_index, mc_alltoall_distance, mc_alltoall_profile, mc_subset_distance,
    mc_subset_profile, mc_subset_profile_from, AllToAllMc, McEstimate,
};
pub use subset::{
    closure_under_gates, evolve_subset, initial_distances, marginal_hs_sq, step_coefficients,
    uv_params, SubsetDistanceVector, MAX_TRACKED_SUBSETS,
};
pub use two_qubit::{
    lower_bound_curve, two_qubit_params, upper_bound_curve, TwoQubitNoiseParams,
};

#[derive(Debug, Clone, thiserror::Error)]
pub enum RcError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("noise channel is not symmetric under qubit swap (deviation {0:.3e})")]
    AsymmetricChannel(f64),
    #[error("tracked subset family is not closed; missing: {0}")]
    FamilyNotClosed(String),
    #[error("subset budget exceeded: {0} > {max}", max = subset::MAX_TRACKED_SUBSETS)]
    SubsetBudget(usize),
    #[error(transparent)]
    Channel(#[from] channels::ChannelError),
    #[error(transparent)]
    Core(#[from] qsim_core::CoreError),
}
