//! Kraus-channel construction, the canonical noise models used throughout the
//! workspace (replacement and generalized damping), and the per-channel scalar
//! metrics: noise strength kappa, fixed-point purity eta, the polarization
//! contraction factor chi, the Bloch contraction parameter Delta, and
//! nonunitality.

mod channel;
mod estimate;
mod metrics;
mod spec;

pub use channel::{ChannelError, KrausChannel};
pub use estimate::{diamond_distance_estimate, DiamondEstimate};
pub use metrics::{
    bloch_affine, chi, contraction_delta, diagonalized_form, fixed_point, nonunitality,
    purity_eta, transfer_matrix, ContractionReport, NoiseMetrics,
};
pub use spec::ChannelSpec;
