use num_complex::Complex64;
use qsim_core::CMat;

use crate::RcError;

const REALITY_TOL: f64 = 1e-9;

/// Haar-twirl coefficients of `n` tensor copies of a single-qubit channel:
/// the second-moment maps of the all-to-all layer,
/// `E U^dag (N(U X U^dag))^2 U = alpha X^2 + beta (Tr X)^2 I + omega Tr(X^2) I`
/// and `E Tr (N(U X U^dag))^2 = delta Tr(X^2)` for traceless `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllToAllCoeffs {
    pub n: usize,
    pub alpha_n: f64,
    pub beta_n: f64,
    pub omega_n: f64,
    pub delta_n: f64,
}

/// The eight per-pair trace monomials entering the coefficient formulas.
fn pair_monomials(ki: &CMat, kj: &CMat) -> [Complex64; 8] {
    let tri = ki.trace();
    let trj_d = kj.adjoint().trace();
    let ij = (ki.adjoint() * kj).trace(); // Tr K_i^dag K_j
    let ji = (kj.adjoint() * ki).trace();
    let pi = ki * ki.adjoint();
    let pj = kj * kj.adjoint();
    [
        tri * ij * trj_d,                                  // m1
        (&pi * &pj).trace(),                               // m2 (cyclic form)
        (kj.adjoint() * ki.adjoint() * kj * ki).trace(),   // m3
        tri * (ki.adjoint() * kj * kj.adjoint()).trace(),  // m4
        (ki * ki.adjoint() * kj).trace() * trj_d,          // m5
        ij * ji,                                           // m6
        (ki.adjoint() * kj * ki).trace() * trj_d,          // m7
        tri * (kj.adjoint() * ki.adjoint() * kj).trace(),  // m8
    ]
}

/// Sums the eight trace monomials over all Kraus pairs; entries 0..=5 are the
/// classic invariants E1..E6 and 6, 7 their conjugate partners E7, E8.
pub(crate) fn monomial_sums(kraus_1q: &[CMat]) -> [Complex64; 8] {
    let mut sums = [Complex64::ZERO; 8];
    for ki in kraus_1q {
        for kj in kraus_1q {
            let m = pair_monomials(ki, kj);
            for (s, v) in sums.iter_mut().zip(m.iter()) {
                *s += v;
            }
        }
    }
    sums
}

/// Evaluates the coefficients for `n` copies.
///
/// The traces of n-fold product Kraus operators factorize, so each pair sum
/// over product operators is the n-th power of the corresponding single-qubit
/// pair sum: the invariants are summed over pairs *first* and then raised to
/// the n-th power. `n <= 64` keeps every term inside f64 range (the largest
/// is `d^2 E1^n <= 2^(5n)`).
pub fn alltoall_coeffs(kraus_1q: &[CMat], n: usize) -> Result<AllToAllCoeffs, RcError> {
    if kraus_1q.is_empty() || kraus_1q[0].nrows() != 2 {
        return Err(RcError::InvalidArgument(
            "expected single-qubit Kraus operators".into(),
        ));
    }
    if n == 0 || n > 64 {
        return Err(RcError::InvalidArgument(format!(
            "copy count {n} outside 1..=64"
        )));
    }
    let d = 2f64.powi(n as i32);
    let e = monomial_sums(kraus_1q);
    let p: Vec<Complex64> = e.iter().map(|z| z.powu(n as u32)).collect();
    let delta = real_checked((d * p[5] - p[1]) / (d * (d * d - 1.0)))?;
    if n == 1 {
        // d = 2 zeroes the shared sixth-moment denominator; on a single qubit
        // any traceless X has X^2 = (Tr X^2 / 2) I, so the twirl collapses to
        // one scalar and (delta, 0, 0) is the canonical representative.
        return Ok(AllToAllCoeffs {
            n,
            alpha_n: delta,
            beta_n: 0.0,
            omega_n: 0.0,
            delta_n: delta,
        });
    }
    let den = d * (d * d * d * d - 5.0 * d * d + 4.0);
    let alpha = d * d * p[0] + 4.0 * p[1] + d * d * p[2] - 2.0 * d * (p[3] + p[4] + p[5]);
    let beta = 2.0 * p[0] + (d * d - 2.0) * p[1] + 2.0 * p[2] - d * (p[5] + p[6] + p[7]);
    let omega = 2.0 * p[7] + 2.0 * p[6] + (d * d - 2.0) * p[5] - d * (p[0] + p[1] + p[2]);
    Ok(AllToAllCoeffs {
        n,
        alpha_n: real_checked(alpha / den)?,
        beta_n: real_checked(beta / den)?,
        omega_n: real_checked(omega / den)?,
        delta_n: delta,
    })
}

fn real_checked(z: Complex64) -> Result<f64, RcError> {
    if z.im.abs() > REALITY_TOL * z.re.abs().max(1.0) {
        return Err(RcError::InvalidArgument(format!(
            "twirl coefficient has imaginary part {:.3e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// Transfer-matrix solution after `depth` layers: `A = alpha^depth`,
/// `B = omega (alpha^depth - delta^depth)/(alpha - delta)` with the analytic
/// limit at `alpha = delta`.
pub fn alltoall_ab(coeffs: &AllToAllCoeffs, depth: u32) -> (f64, f64) {
    let (al, om, de) = (coeffs.alpha_n, coeffs.omega_n, coeffs.delta_n);
    let a = al.powi(depth as i32);
    let b = if (al - de).abs() < 1e-14 * al.abs().max(de.abs()).max(1e-300) {
        om * depth as f64 * al.powi(depth as i32 - 1)
    } else {
        om * (al.powi(depth as i32) - de.powi(depth as i32)) / (al - de)
    };
    (a, b)
}

/// Depth-`depth` upper bound on the (1/2-normalized) trace distance between
/// two initially orthogonal pure states:
/// `sqrt(A + 2B) + (N_H/2 - 1) sqrt(2B)` with `N_H = 2^n`.
pub fn alltoall_bound(coeffs: &AllToAllCoeffs, n: usize, depth: u32) -> f64 {
    let (a, b) = alltoall_ab(coeffs, depth);
    let nh = 2f64.powi(n as i32);
    (a + 2.0 * b).max(0.0).sqrt() + (nh / 2.0 - 1.0) * (2.0 * b).max(0.0).sqrt()
}

/// Exact prediction of `E Tr X_d^2` for orthogonal pure inputs
/// (`Tr X_0^2 = 2`): `2 (A + 2^n B)`, which telescopes to `2 delta^d`.
pub fn predicted_second_moment(coeffs: &AllToAllCoeffs, n: usize, depth: u32) -> f64 {
    let (a, b) = alltoall_ab(coeffs, depth);
    2.0 * (a + 2f64.powi(n as i32) * b)
}
