use channels::ChannelSpec;
use random_circuits::ArchitectureSpec;
use serde::{Deserialize, Serialize};

/// Batch-run configuration. Every section has defaults, so an empty config
/// (`{}`) runs each experiment in its reference setup. Command-line flags
/// override `seed`, `trials` and `out`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    pub out: String,
    pub fig2: Fig2Config,
    pub contraction: ContractionConfig,
    pub plan: PlanConfig,
    pub weingarten: WeingartenConfig,
    pub verify: VerifyConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            trials: 0, // 0 = per-experiment default
            out: "results".into(),
            fig2: Fig2Config::default(),
            contraction: ContractionConfig::default(),
            plan: PlanConfig::default(),
            weingarten: WeingartenConfig::default(),
            verify: VerifyConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct Fig2Config {
    pub z_in: f64,
    pub p_in: f64,
    pub z_out_points: usize,
    pub p_out_min: f64,
    pub p_out_points: usize,
}

impl Default for Fig2Config {
    fn default() -> Self {
        Self {
            z_in: 0.1,
            p_in: 0.3,
            z_out_points: 60,
            p_out_min: 1e-6,
            p_out_points: 40,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct ContractionConfig {
    pub channel: ChannelSpec,
    pub architecture: ArchitectureSpec,
    pub trials: usize,
}

impl Default for ContractionConfig {
    fn default() -> Self {
        Self {
            channel: ChannelSpec::damping(0.2, 1.0),
            architecture: ArchitectureSpec {
                kind: random_circuits::ArchKind::Brickwork1d,
                n: 4,
                depth: 6,
                gates: None,
            },
            trials: 2000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct PlanConfig {
    pub mu: f64,
    pub dims: Vec<u32>,
    pub eta_points: usize,
    pub eta_min: f64,
    pub kappa_points: usize,
    /// Log10 range of the kappa sweep per eta.
    pub log10_kappa_min: f64,
    pub log10_kappa_max: f64,
    pub c_settle: f64,
    pub c_swap: f64,
    pub g: f64,
    pub z1: f64,
    pub z2: f64,
    pub c_hybrid: f64,
}

impl Default for PlanConfig {
    fn default() -> Self {
        Self {
            mu: 5.0,
            dims: vec![1, 2, 3],
            eta_points: 7,
            eta_min: 1e-3,
            kappa_points: 24,
            log10_kappa_min: -60.0,
            log10_kappa_max: -2.0,
            c_settle: 1.0,
            c_swap: 1.0,
            g: 0.1,
            z1: 0.1,
            z2: 0.95,
            c_hybrid: 1.0,
        }
    }
}

impl PlanConfig {
    pub fn constants(&self) -> refrigerator::PlanConstants {
        refrigerator::PlanConstants {
            c_settle: self.c_settle,
            c_swap: self.c_swap,
            g: self.g,
            z1: self.z1,
            z2: self.z2,
            c_hybrid: self.c_hybrid,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct WeingartenConfig {
    pub channel: ChannelSpec,
    pub m: usize,
    pub trials: usize,
}

impl Default for WeingartenConfig {
    fn default() -> Self {
        Self {
            channel: ChannelSpec::replacement(0.3, 0.5),
            m: 2,
            trials: 20_000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct VerifyConfig {
    pub twirl_trials: usize,
    pub transfer_trials: usize,
    pub settling_steps: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            twirl_trials: 20_000,
            transfer_trials: 8_000,
            settling_steps: 40,
        }
    }
}
