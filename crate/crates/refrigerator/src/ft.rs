use crate::FridgeError;

/// Concatenated-code bookkeeping for the overhead calculation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtOverheadParams {
    /// Qubits per code block of the base `[[n,1,3]]` code.
    pub n_code: u32,
    /// Ancilla qubits attached to each block for correction gadgets.
    pub n_ancilla: u32,
    /// Gate layers of the deepest gadget.
    pub gadget_depth: u32,
    /// Largest number of physical gates in any logical operation.
    pub max_gates_per_op: u32,
    /// Error-combination constant of the correction gadget.
    pub c: f64,
}

impl Default for FtOverheadParams {
    fn default() -> Self {
        Self {
            n_code: 7,
            n_ancilla: 4,
            gadget_depth: 50,
            max_gates_per_op: 7,
            c: 1.0,
        }
    }
}

impl FtOverheadParams {
    /// Block size `n_B = n + n_A`.
    pub fn n_block(&self) -> u32 {
        self.n_code + self.n_ancilla
    }

    /// Per-level error amplification constant `mu_c = c (4 N_O^2 + 1)`.
    pub fn mu_c(&self) -> f64 {
        self.c * (4.0 * (self.max_gates_per_op as f64).powi(2) + 1.0)
    }

    /// Threshold `kappa_0 = 1/mu_c`.
    pub fn kappa_threshold(&self) -> f64 {
        1.0 / self.mu_c()
    }
}

/// Output of the overhead calculation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtOverhead {
    /// Concatenation levels.
    pub levels: u32,
    /// `n_B^L`.
    pub qubit_overhead: f64,
    /// `Q^L`.
    pub depth_overhead: f64,
    /// The real-valued doubling count `log(N'D'/eps) / log(1/(mu_c kappa))`;
    /// this is the quantity that grows linearly in `log(1/eps)`.
    pub suppression_factor: f64,
}

/// Levels and overheads needed to simulate an `n_logical`-qubit, depth-`depth`
/// noiseless circuit up to error `epsilon` at physical noise `kappa`.
///
/// The residual logical error after `L` levels scales as
/// `N'D' (mu_c kappa)^(2^L)`, so `L` is the smallest integer with
/// `2^L >= log(N'D'/eps) / log(1/(mu_c kappa))`.
pub fn ft_overhead(
    n_logical: u64,
    depth: u64,
    epsilon: f64,
    kappa: f64,
    params: &FtOverheadParams,
) -> Result<FtOverhead, FridgeError> {
    if n_logical == 0 || depth == 0 {
        return Err(FridgeError::InvalidArgument(
            "circuit size and depth must be positive".into(),
        ));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(FridgeError::InvalidArgument(format!(
            "epsilon = {epsilon} outside (0, 1)"
        )));
    }
    let mu_c = params.mu_c();
    if kappa >= params.kappa_threshold() {
        return Err(FridgeError::InvalidArgument(format!(
            "kappa = {kappa} at or above the threshold {:.3e}",
            params.kappa_threshold()
        )));
    }
    if kappa <= 0.0 {
        return Err(FridgeError::InvalidArgument("kappa must be positive".into()));
    }
    let volume = n_logical as f64 * depth as f64;
    let suppression = (volume / epsilon).ln() / (1.0 / (mu_c * kappa)).ln();
    let levels = if suppression <= 1.0 {
        0
    } else {
        suppression.log2().ceil() as u32
    };
    let n_b = params.n_block() as f64;
    let q = params.gadget_depth as f64;
    Ok(FtOverhead {
        levels,
        qubit_overhead: n_b.powi(levels as i32),
        depth_overhead: q.powi(levels as i32),
        suppression_factor: suppression,
    })
}
