use channels::KrausChannel;
use num_complex::Complex64;
use qsim_core::{apply_kraus_on_subset, apply_on_subset, kron, CMat, DensityMatrix};

use crate::FridgeError;

/// Hard cap on compression cycles; convergence is double-exponential, so
/// anything larger is never meaningful.
pub const MAX_CYCLES: u32 = 64;

/// In/out polarizations and error weights of one compression step.
/// `p = 1 - z` throughout this record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressorRelation {
    pub z_in: f64,
    pub z_out: f64,
    pub p_in: f64,
    pub p_out: f64,
}

impl CompressorRelation {
    pub fn from_z(z_in: f64) -> Self {
        let z_out = qcp_relation_z(z_in);
        Self {
            z_in,
            z_out,
            p_in: 1.0 - z_in,
            p_out: 1.0 - z_out,
        }
    }
}

/// CNOT layer of the compressor: qubit 1 flips when qubit 2 is set
/// (qubit 0 is the output qubit and the most significant factor).
pub fn cnot_layer() -> CMat {
    permutation_8(|b0, b1, b2| (b0, b1 ^ b2, b2))
}

/// Controlled-swap layer: qubits 0 and 2 swap when qubit 1 is `|0>`.
pub fn cswap_layer() -> CMat {
    permutation_8(|b0, b1, b2| if b1 == 0 { (b2, b1, b0) } else { (b0, b1, b2) })
}

fn permutation_8(f: impl Fn(usize, usize, usize) -> (usize, usize, usize)) -> CMat {
    let mut m = CMat::zeros(8, 8);
    for b in 0..8usize {
        let (b0, b1, b2) = (b >> 2 & 1, b >> 1 & 1, b & 1);
        let (c0, c1, c2) = f(b0, b1, b2);
        let to = (c0 << 2) | (c1 << 1) | c2;
        m[(to, b)] = Complex64::ONE;
    }
    m
}

/// The 3-qubit compressor unitary: CNOT followed by the controlled swap.
pub fn qcp_unitary() -> CMat {
    cswap_layer() * cnot_layer()
}

/// Noiseless compression relation for polarizations: `3z/2 - z^3/2`.
pub fn qcp_relation_z(z: f64) -> f64 {
    1.5 * z - 0.5 * z * z * z
}

/// Noiseless update of the error weight `p = (1 - z)/2`: the majority-vote
/// map `p^2 (3 - 2p)`. Note this variable is the excited-state probability,
/// half of the `1 - z` depolarization used in [`CompressorRelation`].
pub fn qcp_relation_p(p: f64) -> f64 {
    p * p * (3.0 - 2.0 * p)
}

/// Full 8x8 density-matrix evaluation of the compressor on `rho_in^(x)3`
/// with diagonal single-qubit input of polarization `z_in`; returns the
/// output-qubit polarization.
pub fn simulate_qcp_unitary(z_in: f64) -> f64 {
    let rho1 = DensityMatrix::polarized(z_in).expect("|z| <= 1");
    let rho2 = kron(rho1.mat(), rho1.mat()).unwrap();
    let rho3 = kron(&rho2, rho1.mat()).unwrap();
    let out = apply_on_subset(&rho3, &qcp_unitary(), &[0, 1, 2], 3);
    let reduced = qsim_core::partial_trace_mat(&out, 3, 0b001);
    (reduced[(0, 0)] - reduced[(1, 1)]).re
}

/// 3-qubit simulation of the noisy compressor: CNOT layer then `N^(x)3`,
/// CSWAP layer then `N^(x)3` (six single-qubit channel applications total);
/// returns the output-qubit polarization.
pub fn simulate_noisy_qcp(ch: &KrausChannel, z_in: f64) -> Result<f64, FridgeError> {
    if ch.num_qubits() != 1 {
        return Err(FridgeError::InvalidArgument(
            "noisy compressor expects a single-qubit channel".into(),
        ));
    }
    if !(-1.0..=1.0).contains(&z_in) {
        return Err(FridgeError::InvalidArgument(format!(
            "polarization {z_in} outside [-1, 1]"
        )));
    }
    let rho1 = DensityMatrix::polarized(z_in).unwrap();
    let rho2 = kron(rho1.mat(), rho1.mat()).unwrap();
    let mut rho = kron(&rho2, rho1.mat()).unwrap();
    let kraus = ch.kraus_ops();
    for layer in [cnot_layer(), cswap_layer()] {
        rho = apply_on_subset(&rho, &layer, &[0, 1, 2], 3);
        for q in 0..3usize {
            rho = apply_kraus_on_subset(&rho, kraus, &[q], 3);
        }
    }
    let reduced = qsim_core::partial_trace_mat(&rho, 3, 0b001);
    Ok((reduced[(0, 0)] - reduced[(1, 1)]).re)
}

/// Noisy compressor in the error-weight variable `p = (1 - z)/2`.
pub fn simulate_noisy_qcp_p(ch: &KrausChannel, p_in: f64) -> Result<f64, FridgeError> {
    if !(0.0..=1.0).contains(&p_in) {
        return Err(FridgeError::InvalidArgument(format!(
            "error weight {p_in} outside [0, 1]"
        )));
    }
    let z_out = simulate_noisy_qcp(ch, 1.0 - 2.0 * p_in)?;
    Ok((1.0 - z_out) / 2.0)
}

/// Smallest number of compression cycles driving `z_in` to at least
/// `z_target` under the noiseless map.
pub fn exact_cycle_count(z_in: f64, z_target: f64) -> Result<u32, FridgeError> {
    if !(z_in > 0.0 && z_in < 1.0) {
        return Err(FridgeError::InvalidArgument(format!(
            "z_in = {z_in} outside (0, 1)"
        )));
    }
    if z_target >= 1.0 {
        return Err(FridgeError::Unreachable(format!(
            "z_target = {z_target} is not reachable in finitely many cycles"
        )));
    }
    let mut z = z_in;
    let mut k = 0u32;
    while z < z_target {
        z = qcp_relation_z(z);
        k += 1;
        if k > MAX_CYCLES {
            return Err(FridgeError::Unreachable(format!(
                "no convergence to {z_target} within {MAX_CYCLES} cycles"
            )));
        }
    }
    Ok(k)
}

/// Smallest number of cycles driving the error weight `p_in` down to at most
/// `p_target` under the majority-vote map.
pub fn exact_cycle_count_p(p_in: f64, p_target: f64) -> Result<u32, FridgeError> {
    if !(p_in > 0.0 && p_in < 0.5) {
        return Err(FridgeError::InvalidArgument(format!(
            "p_in = {p_in} outside (0, 1/2)"
        )));
    }
    if p_target <= 0.0 {
        return Err(FridgeError::Unreachable(
            "p_target = 0 is not reachable in finitely many cycles".into(),
        ));
    }
    let mut p = p_in;
    let mut k = 0u32;
    while p > p_target {
        p = qcp_relation_p(p);
        k += 1;
        if k > MAX_CYCLES {
            return Err(FridgeError::Unreachable(format!(
                "no convergence to {p_target} within {MAX_CYCLES} cycles"
            )));
        }
    }
    Ok(k)
}

/// Cycle-count bound `log(z_out/z_in) / log(3/2 - z_out^2/2)`; its ceiling
/// upper-bounds [`exact_cycle_count`].
pub fn cycle_bound_small_z(z_in: f64, z_out: f64) -> Result<f64, FridgeError> {
    if !(z_in > 0.0 && z_in <= z_out && z_out < 1.0) {
        return Err(FridgeError::InvalidArgument(format!(
            "need 0 < z_in <= z_out < 1, got ({z_in}, {z_out})"
        )));
    }
    let gain = 1.5 - 0.5 * z_out * z_out;
    if gain <= 1.0 {
        // log argument <= 0 happens only for z_out >= sqrt(3) which the range
        // check already excludes; this guards the gain > 1 requirement
        return Err(FridgeError::InvalidArgument(format!(
            "per-cycle gain {gain} <= 1 at z_out = {z_out}"
        )));
    }
    Ok((z_out / z_in).ln() / gain.ln())
}

/// Double-log cycle bound `log2(log(3 p_out) / log(3 p_in))` for the error
/// weight in the `p < 1/3` regime.
pub fn cycle_bound_small_p(p_in: f64, p_out: f64) -> Result<f64, FridgeError> {
    if !(p_out > 0.0 && p_out <= p_in) {
        return Err(FridgeError::InvalidArgument(format!(
            "need 0 < p_out <= p_in, got ({p_in}, {p_out})"
        )));
    }
    if p_in >= 1.0 / 3.0 {
        return Err(FridgeError::InvalidArgument(format!(
            "p_in = {p_in} >= 1/3 breaks monotonicity of the bound"
        )));
    }
    if p_out == p_in {
        return Ok(0.0);
    }
    Ok(((3.0 * p_out).ln() / (3.0 * p_in).ln()).log2())
}

/// The staged (hybrid) bound on the compressor in/out ratio.
#[derive(Debug, Clone, Copy)]
pub struct HybridRatioBound {
    /// `(z1/z_in)^(mu0 + delta1)`: the small-polarization stage.
    pub r1: f64,
    /// `(z2/z1)^(mu0 + delta2)`: the constant mid stage.
    pub r2: f64,
    /// `(log(3 p_out)/log(3 p2))^alpha`: the error-weight tail stage.
    pub r3: f64,
    /// `r1 * r2 * r3`, equal to the closed-form
    /// `C (-log 3(1-z_out))^alpha / z_in^(mu0+delta1)`.
    pub total: f64,
    pub alpha: f64,
    pub mu0: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// The constant of the closed form.
    pub c: f64,
}

/// `log 3 / log(3/2)`, the noiseless ratio-bound exponent.
pub fn mu_zero() -> f64 {
    3f64.ln() / 1.5f64.ln()
}

/// Exponent correction `log3/log(3/2 - z^2/2) - mu0` of the z-stage bound.
fn delta_correction(z: f64) -> f64 {
    3f64.ln() / (1.5 - 0.5 * z * z).ln() - mu_zero()
}

/// Three-stage bound on `R = N_in/N_out` for a noiseless compound compressor
/// running `z_in -> z1 -> z2 -> z_out`; `z2 > 2/3` so the final stage can use
/// the double-exponential error-weight bound.
pub fn ratio_bound_noiseless(
    z_in: f64,
    z_out: f64,
    z1: f64,
    z2: f64,
) -> Result<HybridRatioBound, FridgeError> {
    if !(0.0 < z_in && z_in < z1 && z1 < z2 && z2 < z_out && z_out < 1.0) {
        return Err(FridgeError::InvalidArgument(format!(
            "stage ordering violated: need 0 < z_in < z1 < z2 < z_out < 1, got \
             ({z_in}, {z1}, {z2}, {z_out})"
        )));
    }
    if z2 <= 2.0 / 3.0 {
        return Err(FridgeError::InvalidArgument(format!(
            "z2 = {z2} <= 2/3 leaves the tail stage outside its regime"
        )));
    }
    let alpha = 3f64.log2();
    let mu0 = mu_zero();
    let delta1 = delta_correction(z1);
    let delta2 = delta_correction(z2);
    let r1 = (z1 / z_in).powf(mu0 + delta1);
    let r2 = (z2 / z1).powf(mu0 + delta2);
    let p2 = 1.0 - z2;
    let p_out = 1.0 - z_out;
    let r3 = ((3.0 * p_out).ln() / (3.0 * p2).ln()).powf(alpha);
    let c = z1.powf(delta1 - delta2) * z2.powf(mu0 + delta2) / (-(3.0 * p2).ln()).powf(alpha);
    Ok(HybridRatioBound {
        r1,
        r2,
        r3,
        total: r1 * r2 * r3,
        alpha,
        mu0,
        delta1,
        delta2,
        c,
    })
}
