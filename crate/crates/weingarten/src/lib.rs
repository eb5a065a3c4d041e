//! Haar second- and fourth-moment machinery: the explicit fourth-moment
//! tensor, channel-twirl coefficient formulas, the replacement/damping trace
//! invariants, and Monte Carlo verification of the two master identities.

mod moments;
mod twirl;
mod verify;

pub use moments::haar_fourth_moment;
pub use twirl::{e_invariants, e_invariants_extended, twirl_coefficients, twirl_delta};
pub use verify::{mc_verify_twirl, TwirlReport};

#[derive(Debug, Clone, thiserror::Error)]
pub enum WgError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("coefficient has non-negligible imaginary part {0:.3e}")]
    NotReal(f64),
}
