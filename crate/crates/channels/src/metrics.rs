use nalgebra::{Matrix3, Vector3};
use qsim_core::{diagonalize_state, pauli, trace_norm, CMat, DensityMatrix, RngStream};

use crate::channel::{ChannelError, KrausChannel};
use crate::estimate::diamond_distance_estimate;

/// Fixed-point / uniqueness threshold: the Bloch linear part may not have an
/// eigenvalue within this distance of 1.
const UNIQUE_FP_TOL: f64 = 1e-8;
const FP_RESIDUAL_TOL: f64 = 1e-9;

/// Scalar metrics of a single-qubit channel, computed once per channel.
#[derive(Debug, Clone)]
pub struct NoiseMetrics {
    /// Variational lower-bound estimate of `||N - I||_diamond`.
    pub kappa: f64,
    /// Fixed-point purity `sqrt(2 Tr(sigma*^2) - 1)`.
    pub eta: f64,
    /// `1/2 Tr(Z N'(Z))` in the diagonalized frame.
    pub chi: f64,
    /// Worst-case contraction parameter from the Bloch linear part.
    pub delta_contraction: f64,
    /// False when some Bloch direction is preserved (unitary/dephasing-like).
    pub contracting: bool,
    pub fixed_point: DensityMatrix,
    /// `||N(I) - I||_1`.
    pub nonunitality: f64,
}

impl NoiseMetrics {
    /// Budget and stream for the internal kappa estimate are fixed so the
    /// cached metrics are reproducible run to run.
    pub fn compute(ch: &KrausChannel) -> Result<Self, ChannelError> {
        let fp = fixed_point(ch)?;
        let eta = purity_eta(&fp);
        let diag = diagonalized_form(ch)?;
        let chi_v = chi(&diag);
        let est = diamond_distance_estimate(ch, 32, &RngStream::new(0x0d1a_404d, 0))?;
        let rep = contraction_delta(ch, est.value.max(f64::MIN_POSITIVE))?;
        Ok(Self {
            kappa: est.value,
            eta,
            chi: chi_v,
            delta_contraction: rep.delta,
            contracting: rep.contracting,
            fixed_point: fp,
            nonunitality: nonunitality(ch),
        })
    }
}

/// Bloch-ball affine representation `r -> m r + t` of a single-qubit channel.
pub fn bloch_affine(ch: &KrausChannel) -> Result<(Matrix3<f64>, Vector3<f64>), ChannelError> {
    if ch.num_qubits() != 1 {
        return Err(ChannelError::NotSingleQubit(ch.num_qubits()));
    }
    let sigmas = [pauli::x(), pauli::y(), pauli::z()];
    let mut m = Matrix3::zeros();
    let mut t = Vector3::zeros();
    let n_id = ch.apply_mat(&CMat::identity(2, 2));
    for i in 0..3 {
        t[i] = 0.5 * (&sigmas[i] * (&n_id - CMat::identity(2, 2))).trace().re;
        for j in 0..3 {
            let nj = ch.apply_mat(&sigmas[j]);
            m[(i, j)] = 0.5 * (&sigmas[i] * nj).trace().re;
        }
    }
    Ok((m, t))
}

/// Unique fixed point of a single-qubit channel.
///
/// Eigenvalues of the 4x4 transfer matrix are `{1} U eig(m)` with `m` the
/// Bloch linear part, so uniqueness reduces to `1 not in eig(m)`. The check
/// uses `sigma_min(I - m)`, a lower bound on `min |1 - eig(m)|` that is tight
/// for the normal Bloch maps of the channels used here, and unlike an
/// iterative Schur pass it cannot stall on rank-deficient inputs.
pub fn fixed_point(ch: &KrausChannel) -> Result<DensityMatrix, ChannelError> {
    let (m, t) = bloch_affine(ch)?;
    let lhs = Matrix3::identity() - m;
    let gram = lhs.transpose() * lhs;
    let min_sv_sq = gram
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
        .max(0.0);
    if min_sv_sq.sqrt() <= UNIQUE_FP_TOL {
        return Err(ChannelError::NonUniqueFixedPoint(UNIQUE_FP_TOL));
    }
    let r = lhs
        .lu()
        .solve(&t)
        .ok_or(ChannelError::NonUniqueFixedPoint(UNIQUE_FP_TOL))?;
    let fp = DensityMatrix::from_bloch([r[0], r[1], r[2]])
        .map_err(|e| ChannelError::InvalidParameter(format!("fixed point invalid: {e}")))?;
    // N(sigma*) = sigma* within tolerance
    let residual = (ch.apply_mat(fp.mat()) - fp.mat())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if residual > FP_RESIDUAL_TOL {
        return Err(ChannelError::InvalidParameter(format!(
            "fixed-point residual {residual:.3e}"
        )));
    }
    Ok(fp)
}

/// `sqrt(max(0, 2 Tr(sigma^2) - 1))` of a single-qubit state.
pub fn purity_eta(sigma: &DensityMatrix) -> f64 {
    (2.0 * sigma.purity() - 1.0).max(0.0).sqrt()
}

/// Diagonalized form `N' = U N U^dag`, with `U` rotating the fixed point onto
/// `diag((1+eta)/2, (1-eta)/2)` so the fixed-point polarization is `+eta`.
pub fn diagonalized_form(ch: &KrausChannel) -> Result<KrausChannel, ChannelError> {
    let fp = fixed_point(ch)?;
    let (u, _) = diagonalize_state(&fp);
    ch.conjugated(&u)
}

/// `chi = 1/2 Tr(Z N'(Z))`; callers pass a channel already in diagonalized form.
pub fn chi(ch_diag: &KrausChannel) -> f64 {
    let nz = ch_diag.apply_mat(&pauli::z());
    0.5 * (pauli::z() * nz).trace().re
}

/// Trace norm of `N(I) - I`.
pub fn nonunitality(ch: &KrausChannel) -> f64 {
    trace_norm(&ch.identity_defect()).expect("identity defect is square")
}

/// Contraction analysis of a single-qubit channel.
#[derive(Debug, Clone, Copy)]
pub struct ContractionReport {
    /// `(1 - max ratio)/kappa`; zero when not contracting.
    pub delta: f64,
    /// Largest singular value of the Bloch linear part: the worst-case
    /// `||N(rho - sigma)||_1 / ||rho - sigma||_1`.
    pub max_ratio: f64,
    pub contracting: bool,
}

/// Worst-case Delta from the singular values of the Bloch linear part; exact
/// for qubit channels because trace norms of traceless Hermitian matrices are
/// Euclidean norms of Bloch-difference vectors.
pub fn contraction_delta(ch: &KrausChannel, kappa: f64) -> Result<ContractionReport, ChannelError> {
    if kappa <= 0.0 {
        return Err(ChannelError::InvalidParameter(format!(
            "kappa = {kappa} must be positive"
        )));
    }
    let (m, _) = bloch_affine(ch)?;
    let gram = m.transpose() * m;
    let max_ratio = gram
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
        .max(0.0)
        .sqrt();
    if max_ratio >= 1.0 - 1e-12 {
        return Ok(ContractionReport {
            delta: 0.0,
            max_ratio,
            contracting: false,
        });
    }
    Ok(ContractionReport {
        delta: (1.0 - max_ratio) / kappa,
        max_ratio,
        contracting: true,
    })
}

/// Exposes the transfer-matrix route for oracle tests.
pub fn transfer_matrix(ch: &KrausChannel) -> Result<CMat, ChannelError> {
    if ch.num_qubits() != 1 {
        return Err(ChannelError::NotSingleQubit(ch.num_qubits()));
    }
    Ok(crate::channel::transfer_matrix_4x4(ch))
}


