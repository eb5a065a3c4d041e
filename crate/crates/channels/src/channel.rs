use std::sync::OnceLock;

use num_complex::Complex64;
use qsim_core::{
    apply_kraus_on_subset, c64, diagonalize_state, is_finite, kron, CMat, CoreError,
    DensityMatrix, QubitSubset,
};

use crate::metrics::NoiseMetrics;

const COMPLETENESS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, thiserror::Error)]
pub enum ChannelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("channel acts on {expected} qubits, got a target of {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("Kraus completeness violated by {deviation:.3e}")]
    IncompleteKraus { deviation: f64 },
    #[error("channel has no unique fixed point (transfer eigenvalue within {0:.1e} of 1)")]
    NonUniqueFixedPoint(f64),
    #[error("operation requires a single-qubit channel, got {0} qubits")]
    NotSingleQubit(usize),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// A CPTP map given by its Kraus operators, each `2^m x 2^m`.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    num_qubits: usize,
    ops: Vec<CMat>,
    metrics: OnceLock<Result<NoiseMetrics, ChannelError>>,
}

impl KrausChannel {
    /// Validates operator shapes, finiteness and completeness.
    pub fn new(ops: Vec<CMat>) -> Result<Self, ChannelError> {
        let first = ops
            .first()
            .ok_or_else(|| ChannelError::InvalidParameter("empty Kraus list".into()))?;
        let dim = first.nrows();
        if !dim.is_power_of_two() {
            return Err(CoreError::NotPowerOfTwo { dim }.into());
        }
        for k in &ops {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(ChannelError::InvalidParameter(
                    "Kraus operators must share one square shape".into(),
                ));
            }
            if !is_finite(k) {
                return Err(CoreError::NonFinite.into());
            }
        }
        let mut sum = CMat::zeros(dim, dim);
        for k in &ops {
            sum += k.adjoint() * k;
        }
        let deviation = (sum - CMat::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if deviation > COMPLETENESS_TOL {
            return Err(ChannelError::IncompleteKraus { deviation });
        }
        Ok(Self {
            num_qubits: dim.trailing_zeros() as usize,
            ops,
            metrics: OnceLock::new(),
        })
    }

    /// The identity channel on one qubit.
    pub fn identity() -> Self {
        Self::new(vec![CMat::identity(2, 2)]).unwrap()
    }

    /// Replacement channel `rho -> (1-gamma) rho + gamma sigma*`, built from
    /// the five Kraus operators in the eigenbasis of `sigma*`.
    pub fn replacement(gamma: f64, sigma_star: &DensityMatrix) -> Result<Self, ChannelError> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(ChannelError::InvalidParameter(format!(
                "replacement rate gamma = {gamma} outside (0, 1]"
            )));
        }
        if sigma_star.n_qubits() != 1 {
            return Err(ChannelError::NotSingleQubit(sigma_star.n_qubits()));
        }
        // rows of u are <psi_0| and <psi_1| with eigenvalues (1+eta)/2 >= (1-eta)/2
        let (u, diag) = diagonalize_state(sigma_star);
        let eta = (diag.mat()[(0, 0)] - diag.mat()[(1, 1)]).re;
        // |psi_0>, |psi_1>: the rows of u are the corresponding bras
        let psi0 = CMat::from_column_slice(2, 1, &[u[(0, 0)].conj(), u[(0, 1)].conj()]);
        let psi1 = CMat::from_column_slice(2, 1, &[u[(1, 0)].conj(), u[(1, 1)].conj()]);
        let proj = |a: &CMat, b: &CMat| -> CMat { a * b.adjoint() };
        let hi = (gamma * (1.0 + eta) / 2.0).sqrt();
        let lo = (gamma * (1.0 - eta) / 2.0).sqrt();
        let ops = vec![
            CMat::identity(2, 2) * c64((1.0 - gamma).sqrt(), 0.0),
            proj(&psi0, &psi0) * c64(hi, 0.0),
            proj(&psi0, &psi1) * c64(hi, 0.0),
            proj(&psi1, &psi0) * c64(lo, 0.0),
            proj(&psi1, &psi1) * c64(lo, 0.0),
        ];
        Self::new(ops)
    }

    /// Depolarizing channel: replacement towards the maximally mixed state.
    pub fn depolarizing(gamma: f64) -> Result<Self, ChannelError> {
        Self::replacement(gamma, &DensityMatrix::maximally_mixed(1))
    }

    /// Generalized damping channel with rate `gamma` and steady-state purity
    /// `eta`; `eta = 1` is the standard amplitude damping channel.
    pub fn generalized_damping(gamma: f64, eta: f64) -> Result<Self, ChannelError> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(ChannelError::InvalidParameter(format!(
                "damping rate gamma = {gamma} outside (0, 1]"
            )));
        }
        if !(0.0..=1.0).contains(&eta) {
            return Err(ChannelError::InvalidParameter(format!(
                "purity eta = {eta} outside [0, 1]"
            )));
        }
        let hi = ((1.0 + eta) / 2.0).sqrt();
        let lo = ((1.0 - eta) / 2.0).sqrt();
        let s = (1.0 - gamma).sqrt();
        let g = gamma.sqrt();
        let m = |a: f64, b: f64, c: f64, d: f64, w: f64| {
            CMat::from_row_slice(2, 2, &[c64(a, 0.), c64(b, 0.), c64(c, 0.), c64(d, 0.)])
                * c64(w, 0.)
        };
        let ops = vec![
            m(1., 0., 0., s, hi),
            m(s, 0., 0., 1., lo),
            m(0., g, 0., 0., hi),
            m(0., 0., g, 0., lo),
        ];
        Self::new(ops)
    }

    /// Dephasing channel `rho -> (1-gamma/2) rho + (gamma/2) Z rho Z`.
    pub fn dephasing(gamma: f64) -> Result<Self, ChannelError> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(ChannelError::InvalidParameter(format!(
                "dephasing rate gamma = {gamma} outside [0, 1]"
            )));
        }
        let ops = vec![
            CMat::identity(2, 2) * c64((1.0 - gamma / 2.0).sqrt(), 0.0),
            qsim_core::pauli::z() * c64((gamma / 2.0).sqrt(), 0.0),
        ];
        Self::new(ops)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn kraus_ops(&self) -> &[CMat] {
        &self.ops
    }

    /// Tensor power `N^{(x) m}`; the Kraus list is every m-fold product.
    pub fn tensor_power(&self, m: usize) -> Result<Self, ChannelError> {
        assert!(m >= 1);
        let mut ops: Vec<CMat> = self.ops.clone();
        for _ in 1..m {
            let mut next = Vec::with_capacity(ops.len() * self.ops.len());
            for a in &ops {
                for b in &self.ops {
                    next.push(kron(a, b)?);
                }
            }
            ops = next;
        }
        Self::new(ops)
    }

    /// Applies the channel to `rho` on the qubits in `on` (identity elsewhere).
    pub fn apply(
        &self,
        rho: &DensityMatrix,
        on: QubitSubset,
    ) -> Result<DensityMatrix, ChannelError> {
        if on.len() != self.num_qubits {
            return Err(ChannelError::ArityMismatch {
                expected: self.num_qubits,
                got: on.len(),
            });
        }
        on.check_in(rho.n_qubits())?;
        let out = apply_kraus_on_subset(rho.mat(), &self.ops, &on.qubits(), rho.n_qubits());
        Ok(DensityMatrix::new_unchecked(out))
    }

    /// Linear action on an arbitrary (not necessarily positive) matrix living
    /// on exactly the channel's qubits.
    pub fn apply_mat(&self, m: &CMat) -> CMat {
        let qubits: Vec<usize> = (0..self.num_qubits).collect();
        apply_kraus_on_subset(m, &self.ops, &qubits, self.num_qubits)
    }

    /// `N(I) - I` as a matrix; zero for unital channels.
    pub fn identity_defect(&self) -> CMat {
        let dim = 1usize << self.num_qubits;
        self.apply_mat(&CMat::identity(dim, dim)) - CMat::identity(dim, dim)
    }

    /// Cached scalar metrics; single-qubit channels with a unique fixed point
    /// only. The kappa estimate inside uses a fixed internal budget and seed,
    /// so the cached value is reproducible.
    pub fn metrics(&self) -> Result<&NoiseMetrics, ChannelError> {
        self.metrics
            .get_or_init(|| NoiseMetrics::compute(self))
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// Conjugated channel `U N U^dag` (Kraus ops become `U K U^dag`).
    pub fn conjugated(&self, u: &CMat) -> Result<Self, ChannelError> {
        let ops = self.ops.iter().map(|k| u * k * u.adjoint()).collect();
        Self::new(ops)
    }
}

impl PartialEq for KrausChannel {
    fn eq(&self, other: &Self) -> bool {
        self.num_qubits == other.num_qubits && self.ops == other.ops
    }
}

/// Builds `sum_i K_i (x) conj(K_i)`-style left/right products lazily; used by
/// tests and the fixed-point oracle.
pub(crate) fn transfer_matrix_4x4(ch: &KrausChannel) -> CMat {
    // acts on vectorized rho (column-major vec): T = sum K (x) conj(K)
    let mut t = CMat::zeros(4, 4);
    for k in ch.kraus_ops() {
        let kc = k.map(|z| z.conj());
        // vec(K rho K^dag) = (conj(K) (x) K) vec(rho) for column-major vec
        t += kc.kronecker(k);
    }
    t
}

/// Complex entries as `[re, im]`; helper shared with the JSON spec.
pub(crate) fn mat_from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<CMat, ChannelError> {
    let r = rows.len();
    if r == 0 || rows.iter().any(|row| row.len() != rows[0].len()) {
        return Err(ChannelError::InvalidParameter(
            "ragged or empty complex matrix".into(),
        ));
    }
    let c = rows[0].len();
    let mut m = CMat::zeros(r, c);
    for (i, row) in rows.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            m[(i, j)] = Complex64::new(p[0], p[1]);
        }
    }
    Ok(m)
}

pub(crate) fn mat_to_pairs(m: &CMat) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}
