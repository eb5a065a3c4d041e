use crate::qcp::mu_zero;
use crate::FridgeError;

/// Explicit constants standing in for every big-O/Theta factor of the RESET
/// construction. All default to 1 except where noted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanConstants {
    /// Settling depth prefactor: `T = c_settle (kappa eta)^(-mu/(mu+d))`.
    pub c_settle: f64,
    /// Swap cost prefactor, in both the CQC depth and the swap term of kappa'.
    pub c_swap: f64,
    /// Feasibility threshold on `kappa N_a^(1/d)`.
    pub g: f64,
    /// Stage boundary ending the small-polarization compressor stage.
    pub z1: f64,
    /// Stage boundary entering the error-weight tail stage (> 11/12).
    pub z2: f64,
    /// Prefactor on the hybrid ratio bound.
    pub c_hybrid: f64,
    /// Noisy-compression constants of the per-cycle gain `3/2 - a k - b z`.
    pub a: f64,
    pub b: f64,
    /// Swap-noise constant in the per-cycle survival factor `1 - f g`.
    pub f: f64,
    /// Circuit depth of one compression cycle (CNOT layer + CSWAP layer).
    pub n_c: u32,
}

impl Default for PlanConstants {
    fn default() -> Self {
        Self {
            c_settle: 1.0,
            c_swap: 1.0,
            g: 0.1,
            z1: 0.1,
            z2: 0.95,
            c_hybrid: 1.0,
            a: 1.0,
            b: 1.0,
            f: 1.0,
            n_c: 2,
        }
    }
}

/// Cycle structure of a compound compressor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CqcSchedule {
    pub cycles: u32,
    /// `3^cycles`.
    pub ratio: u64,
    /// `None` encodes all-to-all connectivity.
    pub lattice_dim: Option<u32>,
    pub per_cycle_depth: u32,
    pub swap_depth_per_cycle: u64,
    pub total_depth: u64,
}

/// Depth of a compound compressor with in/out ratio `ratio = 3^k` on a
/// `d`-dimensional lattice (`None` = all-to-all): `n_c k` gate layers plus
/// `ceil(c_swap R^(1/d))` swap layers per cycle.
pub fn cqc_depth(
    ratio: u64,
    lattice_dim: Option<u32>,
    n_c: u32,
    c_swap: f64,
) -> Result<CqcSchedule, FridgeError> {
    let cycles = ratio_cycles(ratio)?;
    let swap_depth_per_cycle = match lattice_dim {
        None => 0u64,
        Some(0) => {
            return Err(FridgeError::InvalidArgument("lattice dimension 0".into()));
        }
        Some(d) => (c_swap * (ratio as f64).powf(1.0 / d as f64)).ceil() as u64,
    };
    let total_depth = (n_c as u64 + swap_depth_per_cycle) * cycles as u64;
    Ok(CqcSchedule {
        cycles,
        ratio,
        lattice_dim,
        per_cycle_depth: n_c,
        swap_depth_per_cycle,
        total_depth,
    })
}

fn ratio_cycles(ratio: u64) -> Result<u32, FridgeError> {
    let mut r = ratio;
    let mut k = 0u32;
    while r > 1 {
        if r % 3 != 0 {
            return Err(FridgeError::InvalidArgument(format!(
                "ratio {ratio} is not a power of 3"
            )));
        }
        r /= 3;
        k += 1;
    }
    Ok(k)
}

/// A fully resolved RESET plan. Integer fields are ceilings of the real-valued
/// quantities; `kappa_prime` and the overheads are computed from the real
/// values so that sweeps stay smooth and monotone.
#[derive(Debug, Clone, PartialEq)]
pub struct ResetPlan {
    pub kappa: f64,
    pub eta: f64,
    pub lattice_dim: u32,
    pub mu: f64,
    pub constants: PlanConstants,

    /// Ceiling of the real-valued settling depth (may exceed any integer type
    /// for extreme parameters; kept as a float on purpose).
    pub t_settle: f64,
    pub t_settle_real: f64,
    /// Polarization entering the compressor after settling.
    pub z_in: f64,
    /// Target output polarization of the RESET.
    pub z_out_reset: f64,
    /// Ancilla count (the hybrid ratio bound, real-valued).
    pub n_ancilla: f64,
    pub cqc_cycles: u32,
    pub t_reset: f64,
    pub t_reset_real: f64,
    /// Effective noise strength of the RESET-enabled circuit.
    pub kappa_prime: f64,
    pub qubit_overhead: f64,
    pub depth_overhead: f64,
    pub feasible: bool,
    pub infeasible_reasons: Vec<String>,
}

/// Builds a RESET plan for a channel of strength `kappa` and fixed-point
/// purity `eta` on a `d`-dimensional lattice with cooling exponent
/// `mu > mu_0 = log 3 / log(3/2)`.
pub fn plan_reset(
    kappa: f64,
    eta: f64,
    lattice_dim: u32,
    mu: f64,
    constants: &PlanConstants,
) -> Result<ResetPlan, FridgeError> {
    if !(kappa > 0.0 && kappa <= 1.0) || !(eta > 0.0 && eta <= 1.0) {
        return Err(FridgeError::InvalidArgument(format!(
            "kappa = {kappa}, eta = {eta} outside (0, 1]"
        )));
    }
    if lattice_dim == 0 {
        return Err(FridgeError::InvalidArgument("lattice dimension 0".into()));
    }
    let mu0 = mu_zero();
    if mu <= mu0 {
        return Err(FridgeError::InvalidArgument(format!(
            "mu = {mu} must exceed mu_0 = {mu0:.6}"
        )));
    }
    let c = constants;
    if !(c.z1 > 0.0 && c.z1 < c.z2 && c.z2 < 1.0 && c.z2 > 11.0 / 12.0) {
        return Err(FridgeError::InvalidArgument(format!(
            "stage boundaries need 0 < z1 < z2 < 1 and z2 > 11/12, got ({}, {})",
            c.z1, c.z2
        )));
    }

    let d = lattice_dim as f64;
    let mut reasons = Vec::new();

    // settling: T = c_settle (kappa eta)^(-mu/(mu+d)), z_in from the
    // geometric recurrence with the conservative contraction chi = 1 - kappa
    let t_settle_real = c.c_settle * (kappa * eta).powf(-mu / (mu + d));
    let z_in = eta * (-f64::exp_m1(t_settle_real * f64::ln_1p(-kappa.min(1.0 - 1e-300))));

    // RESET error target: the effective-noise scale, kept inside the tail stage
    let q_scale = (kappa * eta.powf(-mu / d)).powf(d / (mu + d));
    let p_out = q_scale.clamp(1e-12, 0.5 * (1.0 - c.z2));
    let z_out = 1.0 - p_out;

    // stage-1 exponent is the caller's mu; it is only a valid cycle bound if
    // the noisy per-cycle gain stays above 3^(1/mu)
    let gain1 = (1.5 - c.a * kappa - c.b * c.z1) * (1.0 - c.f * c.g);
    if gain1 <= 1.0 || mu < 3f64.ln() / gain1.ln() {
        reasons.push(format!(
            "stage-1 noisy gain {gain1:.4} cannot realize exponent mu = {mu:.4}"
        ));
    }
    // the ratio bound is assembled in log space: the stage-1 factor can
    // overflow f64 long before the plan becomes feasible in d >= 2
    let ln_r1 = if z_in < c.z1 {
        mu * (c.z1.ln() - z_in.ln())
    } else {
        0.0
    };
    let ln_r2 = (3f64.ln() / (1.5 - 0.5 * c.z2 * c.z2).ln()) * (c.z2 / c.z1).ln();
    let p2 = (1.0 - c.z2) / 2.0; // error weight at the stage boundary
    let ln_r3 = if p_out / 2.0 < p2 {
        3f64.log2() * (((3.0 * p_out / 2.0).ln()) / (3.0 * p2).ln()).ln()
    } else {
        0.0
    };
    let ln_na = (c.c_hybrid.ln() + ln_r1 + ln_r2 + ln_r3).max(0.0);
    let n_ancilla = ln_na.exp(); // may round to inf; the checks below stay in logs

    // compressor depth on the lattice, real-valued for the noise accounting
    let cycles_real = ln_na / 3f64.ln();
    let cqc_cycles = cycles_real.ceil() as u32;
    let ln_swap_noise = kappa.ln() + ln_na / d; // log of kappa N_a^(1/d)
    let swap_per_cycle = c.c_swap * (ln_na / d).exp();
    let cqc_depth_real = (c.n_c as f64 + swap_per_cycle) * cycles_real;
    let t_reset_real = t_settle_real + cqc_depth_real;

    // idle error while the RESET runs plus swap error across the block
    let kappa_prime = kappa * t_reset_real + c.c_swap * ln_swap_noise.exp();

    if ln_swap_noise > c.g.ln() {
        reasons.push(format!(
            "kappa N_a^(1/d) = {:.3e} exceeds g = {}",
            ln_swap_noise.exp(),
            c.g
        ));
    }
    let s_swap = 2.0 * (c.a + c.f);
    if p_out.ln() < (2.0 * s_swap).ln() + ln_swap_noise {
        reasons.push(format!(
            "target error weight {p_out:.3e} is dominated by swap noise"
        ));
    }

    Ok(ResetPlan {
        kappa,
        eta,
        lattice_dim,
        mu,
        constants: *c,
        t_settle: t_settle_real.ceil(),
        t_settle_real,
        z_in,
        z_out_reset: z_out,
        n_ancilla,
        cqc_cycles,
        t_reset: t_reset_real.ceil(),
        t_reset_real,
        kappa_prime,
        qubit_overhead: n_ancilla,
        depth_overhead: t_reset_real,
        feasible: reasons.is_empty(),
        infeasible_reasons: reasons,
    })
}

