//! The worst-case pipeline: settling simulation, the 3-qubit quantum
//! compressor and its cycle analysis (noiseless and noisy), RESET planning,
//! and the fault-tolerance overhead calculation.

mod ft;
mod planner;
mod qcp;
mod settling;

pub use ft::{ft_overhead, FtOverhead, FtOverheadParams};
pub use planner::{cqc_depth, plan_reset, CqcSchedule, PlanConstants, ResetPlan};
pub use qcp::{
    cnot_layer, cswap_layer, cycle_bound_small_p, cycle_bound_small_z, exact_cycle_count,
    exact_cycle_count_p, mu_zero, qcp_relation_p, qcp_relation_z, qcp_unitary,
    ratio_bound_noiseless, simulate_noisy_qcp, simulate_noisy_qcp_p, simulate_qcp_unitary,
    CompressorRelation, HybridRatioBound, MAX_CYCLES,
};
pub use settling::simulate_settling;

#[derive(Debug, Clone, thiserror::Error)]
pub enum FridgeError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("target unreachable: {0}")]
    Unreachable(String),
    #[error(transparent)]
    Channel(#[from] channels::ChannelError),
}
