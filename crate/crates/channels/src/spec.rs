use serde::{Deserialize, Serialize};

use qsim_core::DensityMatrix;

use crate::channel::{mat_from_pairs, mat_to_pairs, ChannelError, KrausChannel};

/// JSON description of a noise channel. Complex numbers are `[re, im]` pairs.
///
/// ```json
/// {"kind": "replacement", "gamma": 0.2, "eta": 0.5}
/// {"kind": "damping", "gamma": 0.1, "eta": 1.0}
/// {"kind": "custom", "kraus": [[[[1,0],[0,0]],[[0,0],[1,0]]]]}
/// ```
///
/// For `replacement`, `sigma_star` (a 2x2 complex matrix) takes precedence
/// over `eta`; with only `eta` given, the fixed point is
/// `diag((1+eta)/2, (1-eta)/2)`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_star: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kraus: Option<Vec<Vec<Vec<[f64; 2]>>>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Replacement,
    Damping,
    Dephasing,
    Identity,
    Custom,
}

impl ChannelSpec {
    pub fn replacement(gamma: f64, eta: f64) -> Self {
        Self {
            kind: ChannelKind::Replacement,
            gamma: Some(gamma),
            eta: Some(eta),
            sigma_star: None,
            kraus: None,
        }
    }

    pub fn damping(gamma: f64, eta: f64) -> Self {
        Self {
            kind: ChannelKind::Damping,
            gamma: Some(gamma),
            eta: Some(eta),
            sigma_star: None,
            kraus: None,
        }
    }

    pub fn identity() -> Self {
        Self {
            kind: ChannelKind::Identity,
            gamma: None,
            eta: None,
            sigma_star: None,
            kraus: None,
        }
    }

    pub fn custom(ch: &KrausChannel) -> Self {
        Self {
            kind: ChannelKind::Custom,
            gamma: None,
            eta: None,
            sigma_star: None,
            kraus: Some(ch.kraus_ops().iter().map(mat_to_pairs).collect()),
        }
    }

    pub fn build(&self) -> Result<KrausChannel, ChannelError> {
        match self.kind {
            ChannelKind::Identity => Ok(KrausChannel::identity()),
            ChannelKind::Replacement => {
                let gamma = self.require_gamma()?;
                let sigma = match &self.sigma_star {
                    Some(rows) => DensityMatrix::new(mat_from_pairs(rows)?)
                        .map_err(ChannelError::Core)?,
                    None => {
                        let eta = self.eta.unwrap_or(0.0);
                        DensityMatrix::polarized(eta).map_err(ChannelError::Core)?
                    }
                };
                KrausChannel::replacement(gamma, &sigma)
            }
            ChannelKind::Damping => {
                let gamma = self.require_gamma()?;
                KrausChannel::generalized_damping(gamma, self.eta.unwrap_or(1.0))
            }
            ChannelKind::Dephasing => KrausChannel::dephasing(self.require_gamma()?),
            ChannelKind::Custom => {
                let kraus = self.kraus.as_ref().ok_or_else(|| {
                    ChannelError::InvalidParameter("custom channel needs a kraus list".into())
                })?;
                let ops = kraus
                    .iter()
                    .map(|rows| mat_from_pairs(rows))
                    .collect::<Result<Vec<_>, _>>()?;
                KrausChannel::new(ops)
            }
        }
    }

    fn require_gamma(&self) -> Result<f64, ChannelError> {
        self.gamma
            .ok_or_else(|| ChannelError::InvalidParameter("missing gamma".into()))
    }
}
