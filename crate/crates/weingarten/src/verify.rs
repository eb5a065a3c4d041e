use num_complex::Complex64;
use qsim_core::{haar_unitary_with, kron, CMat, RngStream};
use serde::Serialize;

use crate::twirl::{e_invariants, twirl_coefficients, twirl_delta};
use crate::WgError;

/// Outcome of one Monte Carlo verification of the two twirl identities.
#[derive(Debug, Clone, Serialize)]
pub struct TwirlReport {
    pub m: usize,
    pub alpha_m: f64,
    pub beta_m: f64,
    pub omega_m: f64,
    pub delta_m: f64,
    pub e_values: [f64; 6],
    pub trials: usize,
    /// Largest entrywise deviation of the conjugated-square identity, in
    /// standard-error units.
    pub max_sigma_eq09: f64,
    /// Deviation of the scalar trace identity, in standard-error units.
    pub sigma_eq10: f64,
    pub mc_trace_lhs: f64,
    pub trace_rhs: f64,
    pub passed: bool,
}

struct Welford {
    count: f64,
    mean_re: Vec<f64>,
    mean_im: Vec<f64>,
    m2_re: Vec<f64>,
    m2_im: Vec<f64>,
}

impl Welford {
    fn new(len: usize) -> Self {
        Self {
            count: 0.0,
            mean_re: vec![0.0; len],
            mean_im: vec![0.0; len],
            m2_re: vec![0.0; len],
            m2_im: vec![0.0; len],
        }
    }

    fn push(&mut self, sample: &[Complex64]) {
        self.count += 1.0;
        for (i, z) in sample.iter().enumerate() {
            let dr = z.re - self.mean_re[i];
            self.mean_re[i] += dr / self.count;
            self.m2_re[i] += dr * (z.re - self.mean_re[i]);
            let di = z.im - self.mean_im[i];
            self.mean_im[i] += di / self.count;
            self.m2_im[i] += di * (z.im - self.mean_im[i]);
        }
    }

    /// `(mean, stderr)` per entry and component.
    fn stats(&self, i: usize) -> (Complex64, f64, f64) {
        let n = self.count;
        let se = |m2: f64| (m2 / (n * (n - 1.0))).sqrt();
        (
            Complex64::new(self.mean_re[i], self.mean_im[i]),
            se(self.m2_re[i]),
            se(self.m2_im[i]),
        )
    }
}

/// Monte Carlo check of the two master identities on `m <= 3` channel copies
/// for a traceless Hermitian test operator `x`:
///
/// * `E U^dag (N(U X U^dag))^2 U = alpha X^2 + omega Tr(X^2) I` (the
///   `beta (Tr X)^2` term drops for traceless input);
/// * `E Tr (N(U X U^dag))^2 = delta Tr(X^2)`.
pub fn mc_verify_twirl(
    kraus_1q: &[CMat],
    m: usize,
    x: &CMat,
    trials: usize,
    stream: &RngStream,
) -> Result<TwirlReport, WgError> {
    if m == 0 || m > 3 {
        return Err(WgError::InvalidArgument(format!(
            "m = {m} outside the dense verification range 1..=3"
        )));
    }
    let dim = 1usize << m;
    if x.nrows() != dim || x.ncols() != dim {
        return Err(WgError::InvalidArgument(format!(
            "test operator must be {dim}x{dim}"
        )));
    }
    if x.trace().norm() > 1e-10 {
        return Err(WgError::InvalidArgument(
            "test operator must be traceless".into(),
        ));
    }
    if trials < 16 {
        return Err(WgError::InvalidArgument("too few trials".into()));
    }
    let (alpha, beta, omega) = twirl_coefficients(kraus_1q, m)?;
    let delta = twirl_delta(kraus_1q, m)?;
    let e_values = e_invariants(kraus_1q)?;

    // m-fold product Kraus list
    let mut ops: Vec<CMat> = kraus_1q.to_vec();
    for _ in 1..m {
        let mut next = Vec::with_capacity(ops.len() * kraus_1q.len());
        for a in &ops {
            for b in kraus_1q {
                next.push(kron(a, b).expect("small dims"));
            }
        }
        ops = next;
    }

    let mut wf = Welford::new(dim * dim);
    let mut tr_wf = Welford::new(1);
    let mut sample = vec![Complex64::ZERO; dim * dim];
    for trial in 0..trials {
        let mut rng = stream.substream(trial as u64).rng();
        let u = haar_unitary_with(dim, &mut rng);
        let y = &u * x * u.adjoint();
        let mut ny = CMat::zeros(dim, dim);
        for k in &ops {
            ny += k * &y * k.adjoint();
        }
        let sq = &ny * &ny;
        let back = u.adjoint() * &sq * &u;
        sample.copy_from_slice(back.as_slice());
        wf.push(&sample);
        tr_wf.push(&[Complex64::new(sq.trace().re, 0.0)]);
    }

    let trx2 = (x * x).trace().re;
    let rhs = x * x * Complex64::new(alpha, 0.0)
        + CMat::identity(dim, dim) * Complex64::new(omega * trx2, 0.0);
    let mut max_sigma: f64 = 0.0;
    for i in 0..dim * dim {
        let (mean, se_re, se_im) = wf.stats(i);
        let want = rhs.as_slice()[i];
        max_sigma = max_sigma.max((mean.re - want.re).abs() / se_re.max(1e-13));
        max_sigma = max_sigma.max((mean.im - want.im).abs() / se_im.max(1e-13));
    }
    let (tr_mean, tr_se, _) = tr_wf.stats(0);
    let trace_rhs = delta * trx2;
    let sigma_eq10 = (tr_mean.re - trace_rhs).abs() / tr_se.max(1e-13);

    Ok(TwirlReport {
        m,
        alpha_m: alpha,
        beta_m: beta,
        omega_m: omega,
        delta_m: delta,
        e_values,
        trials,
        max_sigma_eq09: max_sigma,
        sigma_eq10,
        mc_trace_lhs: tr_mean.re,
        trace_rhs,
        passed: max_sigma <= 3.0 && sigma_eq10 <= 3.0,
    })
}
