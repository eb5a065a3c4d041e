mod contraction;
mod fig2;
mod plan;
mod verify;
mod weingarten_cmd;

pub use contraction::run_contraction;
pub use fig2::run_fig2;
pub use plan::run_plan;
pub use verify::run_verify;
pub use weingarten_cmd::run_weingarten;

use crate::config::ExperimentConfig;
use crate::csvout::config_hash;

/// Everything an experiment needs to write reproducible outputs.
pub struct RunContext {
    pub cfg: ExperimentConfig,
    pub hash: String,
    pub out_dir: std::path::PathBuf,
}

impl RunContext {
    pub fn new(cfg: ExperimentConfig) -> anyhow::Result<Self> {
        let canonical = serde_json::to_string(&cfg)?;
        let hash = config_hash(&canonical);
        let out_dir = std::path::PathBuf::from(&cfg.out);
        Ok(Self { cfg, hash, out_dir })
    }

    pub fn seed(&self) -> u64 {
        self.cfg.seed
    }
}
