use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::RcError;

/// Gate layout of a parallel circuit: which qubit pairs interact per layer.
#[derive(Debug, Clone, PartialEq)]
pub enum Architecture {
    /// Alternating even/odd nearest-neighbour pairs on a ring (n even).
    Brickwork1d,
    /// A fresh uniformly random perfect matching every layer (n even).
    AllToAllPairs,
    /// Explicit per-layer pair lists, cycled if the depth exceeds the list.
    Custom(Vec<Vec<(usize, usize)>>),
}

impl Architecture {
    /// The two-qubit gates of layer `layer`. Random matchings draw from `rng`.
    pub fn layer_gates(
        &self,
        n: usize,
        layer: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<(usize, usize)>, RcError> {
        match self {
            Architecture::Brickwork1d => {
                if n % 2 != 0 || n < 2 {
                    return Err(RcError::InvalidArgument(format!(
                        "brickwork needs an even number of qubits, got {n}"
                    )));
                }
                let mut gates = Vec::with_capacity(n / 2);
                if layer % 2 == 0 {
                    for q in (0..n).step_by(2) {
                        gates.push((q, q + 1));
                    }
                } else {
                    for q in (1..n).step_by(2) {
                        gates.push((q, (q + 1) % n));
                    }
                }
                Ok(gates)
            }
            Architecture::AllToAllPairs => {
                if n % 2 != 0 || n < 2 {
                    return Err(RcError::InvalidArgument(format!(
                        "pair matching needs an even number of qubits, got {n}"
                    )));
                }
                use rand::seq::SliceRandom;
                let mut qubits: Vec<usize> = (0..n).collect();
                qubits.shuffle(rng);
                Ok(qubits.chunks(2).map(|c| (c[0], c[1])).collect())
            }
            Architecture::Custom(layers) => {
                if layers.is_empty() {
                    return Err(RcError::InvalidArgument("empty gate list".into()));
                }
                Ok(layers[layer % layers.len()].clone())
            }
        }
    }
}

/// JSON form of an architecture plus run geometry.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ArchitectureSpec {
    pub kind: ArchKind,
    pub n: usize,
    pub depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gates: Option<Vec<Vec<(usize, usize)>>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ArchKind {
    Brickwork1d,
    Alltoall,
}

impl ArchitectureSpec {
    /// Pairwise architecture for the subset machinery; `alltoall` with an
    /// explicit gate list degrades to `Custom`, otherwise to random matchings.
    pub fn to_architecture(&self) -> Architecture {
        match (&self.kind, &self.gates) {
            (_, Some(layers)) => Architecture::Custom(layers.clone()),
            (ArchKind::Brickwork1d, None) => Architecture::Brickwork1d,
            (ArchKind::Alltoall, None) => Architecture::AllToAllPairs,
        }
    }
}
