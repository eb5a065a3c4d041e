use num_complex::Complex64;
use qsim_core::CMat;

use crate::moments::haar_fourth_moment;
use crate::WgError;

const REALITY_TOL: f64 = 1e-9;

/// 2x2 complex matrix as a flat row-major array; the twirl formulas only ever
/// touch single-qubit Kraus operators, and spelling the contractions out at
/// entry level keeps this code path independent of the matrix machinery used
/// elsewhere for the same coefficients.
type M2 = [Complex64; 4];

fn to_m2(m: &CMat) -> Result<M2, WgError> {
    if m.nrows() != 2 || m.ncols() != 2 {
        return Err(WgError::InvalidArgument(
            "expected single-qubit (2x2) Kraus operators".into(),
        ));
    }
    Ok([m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]])
}

fn mul(a: &M2, b: &M2) -> M2 {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

fn dag(a: &M2) -> M2 {
    [a[0].conj(), a[2].conj(), a[1].conj(), a[3].conj()]
}

fn tr(a: &M2) -> Complex64 {
    a[0] + a[3]
}

/// The eight pairwise trace sums `E_1..E_8` over the Kraus list:
///
/// ```text
/// E1 = sum Tr(K_i) Tr(K_i^dag K_j) Tr(K_j^dag)     E5 = sum Tr(K_i K_i^dag K_j) Tr(K_j^dag)
/// E2 = sum Tr(K_i K_i^dag K_j K_j^dag)             E6 = sum Tr(K_i^dag K_j) Tr(K_j^dag K_i)
/// E3 = sum Tr(K_j^dag K_i^dag K_j K_i)             E7 = sum Tr(K_i^dag K_j K_i) Tr(K_j^dag)
/// E4 = sum Tr(K_i) Tr(K_i^dag K_j K_j^dag)         E8 = sum Tr(K_i) Tr(K_j^dag K_i^dag K_j)
/// ```
pub fn e_invariants_extended(kraus_1q: &[CMat]) -> Result<[Complex64; 8], WgError> {
    let ops: Vec<M2> = kraus_1q.iter().map(to_m2).collect::<Result<_, _>>()?;
    if ops.is_empty() {
        return Err(WgError::InvalidArgument("empty Kraus list".into()));
    }
    let mut e = [Complex64::ZERO; 8];
    for ki in &ops {
        let kid = dag(ki);
        for kj in &ops {
            let kjd = dag(kj);
            e[0] += tr(ki) * tr(&mul(&kid, kj)) * tr(&kjd);
            e[1] += tr(&mul(&mul(ki, &kid), &mul(kj, &kjd)));
            e[2] += tr(&mul(&mul(&kjd, &kid), &mul(kj, ki)));
            e[3] += tr(ki) * tr(&mul(&kid, &mul(kj, &kjd)));
            e[4] += tr(&mul(&mul(ki, &kid), kj)) * tr(&kjd);
            e[5] += tr(&mul(&kid, kj)) * tr(&mul(&kjd, ki));
            e[6] += tr(&mul(&kid, &mul(kj, ki))) * tr(&kjd);
            e[7] += tr(ki) * tr(&mul(&kjd, &mul(&kid, kj)));
        }
    }
    Ok(e)
}

/// The six classic invariants `E_1..E_6` as reals.
pub fn e_invariants(kraus_1q: &[CMat]) -> Result<[f64; 6], WgError> {
    let e = e_invariants_extended(kraus_1q)?;
    let mut out = [0.0; 6];
    for i in 0..6 {
        if e[i].im.abs() > REALITY_TOL * e[i].re.abs().max(1.0) {
            return Err(WgError::NotReal(e[i].im));
        }
        out[i] = e[i].re;
    }
    Ok(out)
}

/// Twirl coefficients `(alpha_m, beta_m, omega_m)` on `m` channel copies.
///
/// Traces of m-fold product Kraus operators factorize, so the pair sums are
/// computed once on one qubit and raised to the m-th power before combining
/// with the `d = 2^m` prefactors over `d (d^4 - 5 d^2 + 4)`.
///
/// The shared denominator vanishes at `m = 1` (`d = 2`); there the twirl on
/// traceless operators collapses to one scalar (any traceless single-qubit
/// `X` has `X^2 = Tr(X^2)/2 I`), computed from the fourth-moment tensor, and
/// `(delta_1, 0, 0)` is returned as the canonical representative.
pub fn twirl_coefficients(kraus_1q: &[CMat], m: usize) -> Result<(f64, f64, f64), WgError> {
    if m == 0 {
        return Err(WgError::InvalidArgument("m = 0 has no twirl".into()));
    }
    if m > 64 {
        return Err(WgError::InvalidArgument(format!(
            "m = {m} exceeds the f64-safe range (<= 64)"
        )));
    }
    if m == 1 {
        let d1 = delta_one_from_moment_tensor(kraus_1q)?;
        return Ok((d1, 0.0, 0.0));
    }
    let e = e_invariants_extended(kraus_1q)?;
    let p: Vec<Complex64> = e.iter().map(|z| z.powu(m as u32)).collect();
    let d = 2f64.powi(m as i32);
    let den = d * (d * d * d * d - 5.0 * d * d + 4.0);
    let alpha = (d * d * p[0] + 4.0 * p[1] + d * d * p[2] - 2.0 * d * (p[3] + p[4] + p[5])) / den;
    let beta = (2.0 * p[0] + (d * d - 2.0) * p[1] + 2.0 * p[2] - d * (p[5] + p[6] + p[7])) / den;
    let omega = (2.0 * p[7] + 2.0 * p[6] + (d * d - 2.0) * p[5] - d * (p[0] + p[1] + p[2])) / den;
    Ok((real(alpha)?, real(beta)?, real(omega)?))
}

/// `delta_m = (d E_6^m - E_2^m) / (d (d^2 - 1))` with `d = 2^m`.
pub fn twirl_delta(kraus_1q: &[CMat], m: usize) -> Result<f64, WgError> {
    if m == 0 || m > 64 {
        return Err(WgError::InvalidArgument(format!("m = {m} outside 1..=64")));
    }
    let e = e_invariants_extended(kraus_1q)?;
    let d = 2f64.powi(m as i32);
    real((d * e[5].powu(m as u32) - e[1].powu(m as u32)) / (d * (d * d - 1.0)))
}

fn real(z: Complex64) -> Result<f64, WgError> {
    if z.im.abs() > REALITY_TOL * z.re.abs().max(1.0) {
        return Err(WgError::NotReal(z.im));
    }
    Ok(z.re)
}

/// `delta_1` by brute-force contraction of the fourth-moment tensor:
/// `E Tr(N(U Z U^dag))^2 / Tr(Z^2)` spelled out over all twelve indices.
fn delta_one_from_moment_tensor(kraus_1q: &[CMat]) -> Result<f64, WgError> {
    let ops: Vec<M2> = kraus_1q.iter().map(to_m2).collect::<Result<_, _>>()?;
    let x = [
        Complex64::new(1.0, 0.0),
        Complex64::ZERO,
        Complex64::ZERO,
        Complex64::new(-1.0, 0.0),
    ]; // Pauli Z
    let at = |m: &M2, r: usize, c: usize| m[2 * r + c];
    let mut acc = Complex64::ZERO;
    for ki in &ops {
        let kid = dag(ki);
        for kj in &ops {
            let kjd = dag(kj);
            // Tr(K_i U X U^dag K_i^dag K_j U X U^dag K_j^dag), E over U
            for p in 0..2usize {
                for q in 0..2 {
                    for r in 0..2 {
                        for s in 0..2 {
                            for t in 0..2 {
                                for u in 0..2 {
                                    for v in 0..2 {
                                        for w in 0..2 {
                                            for xx in 0..2 {
                                                for y in 0..2 {
                                                    let coeff = at(ki, p, q)
                                                        * at(&x, r, s)
                                                        * at(&kid, t, u)
                                                        * at(kj, u, v)
                                                        * at(&x, w, xx)
                                                        * at(&kjd, y, p);
                                                    if coeff.norm_sqr() == 0.0 {
                                                        continue;
                                                    }
                                                    let m4 = haar_fourth_moment(
                                                        2,
                                                        [q, r, t, s, v, w, y, xx],
                                                    )?;
                                                    acc += coeff * m4;
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    real(acc / 2.0)
}
