use qsim_core::{c64, hs_norm_sq, partial_trace_mat, CMat};

use crate::RcError;

const SWAP_SYMMETRY_TOL: f64 = 1e-10;

/// Scalars of the two-qubit uniform symmetric noise model (`q = 2`):
/// the gate-internal pair `(a, b)`, the cross pair `(A, B)`, the derived
/// case rules, and the two decay rates entering the depth bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitNoiseParams {
    /// `sum_ij |Tr K_i K_j^dag|^2 / q^4`.
    pub a: f64,
    /// `Tr |sum_i K_i K_i^dag|^2 / q^2`.
    pub b: f64,
    /// `sum_ij Tr_m |Tr_m' K_i K_j^dag|^2 / q^3`.
    pub a_cross: f64,
    /// `Tr_m |Tr_m' sum_i K_i K_i^dag|^2 / q^3`.
    pub b_cross: f64,
    /// `alpha = (q^2 a + b)/(q^2 + 1)`: row sum of the within-subset rule.
    pub case1_alpha: f64,
    /// `r = (q^4 a - b)/(q^4 - 1)`: the survival factor of a pair subset
    /// under its own gate (`b = 1` for unital noise).
    pub case1_r: f64,
    /// `beta = q (A + B)/(q^2 + 1)`.
    pub case2_beta: f64,
    /// `mu = q (B - A)/(q^2 - 1)`.
    pub case2_mu: f64,
    /// Lower-bound rate: `-log min(r, (beta^2 - mu^2)/4)`.
    pub gamma_lower: f64,
    /// Upper-bound rate: `-log max(alpha, beta)`.
    pub gamma_upper: f64,
}

/// Derives all scalars from the Kraus list of a swap-symmetric two-qubit
/// channel. The cross parameters use the `1/q^3` normalization that makes a
/// unitary channel give `A = B = 1`.
pub fn two_qubit_params(kraus: &[CMat]) -> Result<TwoQubitNoiseParams, RcError> {
    if kraus.is_empty() || kraus[0].nrows() != 4 {
        return Err(RcError::InvalidArgument(
            "expected a list of 4x4 Kraus operators".into(),
        ));
    }
    let dev = swap_asymmetry(kraus);
    if dev > SWAP_SYMMETRY_TOL {
        return Err(RcError::AsymmetricChannel(dev));
    }
    let q: f64 = 2.0;

    let mut sum_kk = CMat::zeros(4, 4);
    for k in kraus {
        sum_kk += k * k.adjoint();
    }
    let b = hs_norm_sq(&sum_kk) / q.powi(2);

    let mut a = 0.0;
    let mut a_cross = 0.0;
    for ki in kraus {
        for kj in kraus {
            let prod = ki * kj.adjoint();
            a += prod.trace().norm_sqr();
            // trace out the second qubit (within-op bit 1 is the first qubit)
            a_cross += hs_norm_sq(&partial_trace_mat(&prod, 2, 0b01));
        }
    }
    a /= q.powi(4);
    a_cross /= q.powi(3);
    let b_cross = hs_norm_sq(&partial_trace_mat(&sum_kk, 2, 0b01)) / q.powi(3);

    let case1_alpha = (q * q * a + b) / (q * q + 1.0);
    let case1_r = (q.powi(4) * a - b) / (q.powi(4) - 1.0);
    let case2_beta = q * (a_cross + b_cross) / (q * q + 1.0);
    let case2_mu = q * (b_cross - a_cross) / (q * q - 1.0);

    let contraction = case1_r.min(0.25 * (case2_beta * case2_beta - case2_mu * case2_mu));
    if contraction <= 0.0 {
        return Err(RcError::InvalidArgument(format!(
            "per-layer contraction {contraction} is not positive"
        )));
    }
    let growth = case1_alpha.max(case2_beta);
    Ok(TwoQubitNoiseParams {
        a,
        b,
        a_cross,
        b_cross,
        case1_alpha,
        case1_r,
        case2_beta,
        case2_mu,
        gamma_lower: -contraction.ln(),
        gamma_upper: -growth.ln(),
    })
}

/// Max deviation of the channel superoperator from its swap conjugate.
fn swap_asymmetry(kraus: &[CMat]) -> f64 {
    let mut swap = CMat::zeros(4, 4);
    for (r, c) in [(0usize, 0usize), (1, 2), (2, 1), (3, 3)] {
        swap[(r, c)] = c64(1.0, 0.0);
    }
    let mut t = CMat::zeros(16, 16);
    for k in kraus {
        let kc = k.map(|z| z.conj());
        t += kc.kronecker(k);
    }
    let ss = swap.kronecker(&swap); // real, so conj(S) (x) S = S (x) S
    let conj = &ss * &t * &ss;
    (t - conj).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `exp(-Gamma D)`: the depth-D lower bound on the maximal pairwise marginal
/// HS distance (and hence on the full trace distance).
pub fn lower_bound_curve(params: &TwoQubitNoiseParams, depth: u32) -> f64 {
    (-params.gamma_lower * depth as f64).exp()
}

/// `2^(n/2) exp(-Gamma' D)`: the depth-D upper bound on the full trace
/// distance between any two evolved states.
pub fn upper_bound_curve(params: &TwoQubitNoiseParams, n: usize, depth: u32) -> f64 {
    2f64.powf(n as f64 / 2.0) * (-params.gamma_upper * depth as f64).exp()
}
