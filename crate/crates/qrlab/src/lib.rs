//! Batch experiment runner binding the refrigerator and random-circuit
//! calculus: named experiments, JSON config in, CSV/JSON/SVG out.

pub mod config;
pub mod csvout;
pub mod experiments;
pub mod svg;

pub use config::ExperimentConfig;

/// Process exit codes shared by the binary and the integration tests.
pub mod exit_codes {
    pub const OK: i32 = 0;
    pub const VERIFICATION_FAILED: i32 = 1;
    pub const CONFIG_ERROR: i32 = 2;
}
