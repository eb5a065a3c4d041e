use channels::KrausChannel;
use num_complex::Complex64;
use qsim_core::{
    apply_kraus_on_subset, conjugate_on_subset, haar_unitary_with, trace_norm, CMat, QubitSubset,
    RngStream,
};

use crate::arch::Architecture;
use crate::subset::marginal_hs_sq;
use crate::RcError;

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
}

impl McEstimate {
    fn from_sums(sum: f64, sum_sq: f64, count: usize) -> Self {
        let n = count as f64;
        let mean = sum / n;
        let var = ((sum_sq / n - mean * mean) * n / (n - 1.0)).max(0.0);
        Self {
            mean,
            stderr: (var / n).sqrt(),
        }
    }
}

/// Basis index of the computational state whose qubit `q` equals bit `q` of
/// `bits` (qubit 0 living in the most significant position).
pub fn bitstring_index(n: usize, bits: u32) -> usize {
    let mut idx = 0usize;
    for q in 0..n {
        if bits >> q & 1 == 1 {
            idx |= 1 << (n - 1 - q);
        }
    }
    idx
}

fn initial_difference(n: usize, bits_a: u32, bits_b: u32) -> CMat {
    let dim = 1usize << n;
    let mut d = CMat::zeros(dim, dim);
    let a = bitstring_index(n, bits_a);
    let b = bitstring_index(n, bits_b);
    d[(a, a)] += Complex64::ONE;
    d[(b, b)] -= Complex64::ONE;
    d
}

struct TrialLimits;

impl TrialLimits {
    const MAX_PAIRWISE_QUBITS: usize = 8;
    const MAX_GLOBAL_QUBITS: usize = 6;
}

/// Monte Carlo estimate of the squared marginal HS distance
/// `S_G = 1/2 E || Tr_{F\G}(rho_k - sigma_k) ||_2^2` after `depth` layers,
/// with fresh Haar two-qubit gates per trial, each followed by the two-qubit
/// channel `noise`. The run starts from `|0...0>` vs `|10...0>`.
pub fn mc_subset_distance(
    n: usize,
    arch: &Architecture,
    noise: &KrausChannel,
    g: QubitSubset,
    depth: usize,
    trials: usize,
    stream: &RngStream,
) -> Result<McEstimate, RcError> {
    let profile = mc_subset_profile(n, arch, noise, &[g], 0, 1, depth, trials, stream)?;
    Ok(profile[depth - 1][0])
}

/// Per-depth, per-subset Monte Carlo estimates of `S_G`; depth `d` entries
/// come from the first `d` layers of each sampled circuit. `bits_a`/`bits_b`
/// select the initial bitstring pair (bit q = value of qubit q).
#[allow(clippy::too_many_arguments)]
pub fn mc_subset_profile(
    n: usize,
    arch: &Architecture,
    noise: &KrausChannel,
    subsets: &[QubitSubset],
    bits_a: u32,
    bits_b: u32,
    depth: usize,
    trials: usize,
    stream: &RngStream,
) -> Result<Vec<Vec<McEstimate>>, RcError> {
    let x0 = initial_difference(n, bits_a, bits_b);
    mc_subset_profile_from(n, arch, noise, subsets, &x0, depth, trials, stream)
}

/// Same as [`mc_subset_profile`] but starting from an arbitrary traceless
/// Hermitian difference matrix.
#[allow(clippy::too_many_arguments)]
pub fn mc_subset_profile_from(
    n: usize,
    arch: &Architecture,
    noise: &KrausChannel,
    subsets: &[QubitSubset],
    x0: &CMat,
    depth: usize,
    trials: usize,
    stream: &RngStream,
) -> Result<Vec<Vec<McEstimate>>, RcError> {
    if n > TrialLimits::MAX_PAIRWISE_QUBITS {
        return Err(RcError::InvalidArgument(format!(
            "{n} qubits exceeds the dense-simulation limit {}",
            TrialLimits::MAX_PAIRWISE_QUBITS
        )));
    }
    if noise.num_qubits() != 2 {
        return Err(RcError::InvalidArgument(
            "pairwise runs take a two-qubit noise channel".into(),
        ));
    }
    if depth == 0 || trials < 2 {
        return Err(RcError::InvalidArgument(
            "need depth >= 1 and at least two trials".into(),
        ));
    }
    for g in subsets {
        g.check_in(n)?;
    }
    let kraus = noise.kraus_ops();
    let mut sums = vec![vec![(0.0f64, 0.0f64); subsets.len()]; depth];
    for trial in 0..trials {
        let mut rng = stream.substream(trial as u64).rng();
        let mut x = x0.clone();
        for layer in 0..depth {
            for (i, j) in arch.layer_gates(n, layer, &mut rng)? {
                let u = haar_unitary_with(4, &mut rng);
                conjugate_on_subset(&mut x, &u, &[i, j], n);
                x = apply_kraus_on_subset(&x, kraus, &[i, j], n);
            }
            for (si, g) in subsets.iter().enumerate() {
                let s = marginal_hs_sq(&x, n, *g);
                sums[layer][si].0 += s;
                sums[layer][si].1 += s * s;
            }
        }
    }
    Ok(sums
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|(s, s2)| McEstimate::from_sums(s, s2, trials))
                .collect()
        })
        .collect())
}

/// Per-depth Monte Carlo results of the all-to-all model: global Haar gates
/// followed by `N^(x)n` single-qubit noise.
#[derive(Debug, Clone)]
pub struct AllToAllMc {
    /// `1/2 E ||X_d||_1` per depth.
    pub trace_distance: Vec<McEstimate>,
    /// `E Tr X_d^2` per depth.
    pub second_moment: Vec<McEstimate>,
}

/// Estimates `1/2 E || C_d(rho - sigma) ||_1` at the final depth.
pub fn mc_alltoall_distance(
    n: usize,
    depth: usize,
    noise_1q: &KrausChannel,
    trials: usize,
    stream: &RngStream,
) -> Result<McEstimate, RcError> {
    let prof = mc_alltoall_profile(n, depth, noise_1q, trials, stream)?;
    Ok(prof.trace_distance[depth - 1])
}

/// Full per-depth profile of the all-to-all run, starting from
/// `|0...0>` vs `|10...0>`.
pub fn mc_alltoall_profile(
    n: usize,
    depth: usize,
    noise_1q: &KrausChannel,
    trials: usize,
    stream: &RngStream,
) -> Result<AllToAllMc, RcError> {
    if n > TrialLimits::MAX_GLOBAL_QUBITS {
        return Err(RcError::InvalidArgument(format!(
            "{n} qubits exceeds the global-gate limit {}",
            TrialLimits::MAX_GLOBAL_QUBITS
        )));
    }
    if noise_1q.num_qubits() != 1 {
        return Err(RcError::InvalidArgument(
            "all-to-all runs take a single-qubit noise channel".into(),
        ));
    }
    if depth == 0 || trials < 2 {
        return Err(RcError::InvalidArgument(
            "need depth >= 1 and at least two trials".into(),
        ));
    }
    let dim = 1usize << n;
    let kraus = noise_1q.kraus_ops();
    let x0 = initial_difference(n, 0, 1);
    let mut tr_sums = vec![(0.0f64, 0.0f64); depth];
    let mut sq_sums = vec![(0.0f64, 0.0f64); depth];
    for trial in 0..trials {
        let mut rng = stream.substream(trial as u64).rng();
        let mut x = x0.clone();
        let all: Vec<usize> = (0..n).collect();
        for layer in 0..depth {
            let u = haar_unitary_with(dim, &mut rng);
            conjugate_on_subset(&mut x, &u, &all, n);
            for q in 0..n {
                x = apply_kraus_on_subset(&x, kraus, &[q], n);
            }
            let td = 0.5 * trace_norm(&x).expect("square");
            let sq = x.iter().map(|z| z.norm_sqr()).sum::<f64>();
            tr_sums[layer].0 += td;
            tr_sums[layer].1 += td * td;
            sq_sums[layer].0 += sq;
            sq_sums[layer].1 += sq * sq;
        }
    }
    Ok(AllToAllMc {
        trace_distance: tr_sums
            .into_iter()
            .map(|(s, s2)| McEstimate::from_sums(s, s2, trials))
            .collect(),
        second_moment: sq_sums
            .into_iter()
            .map(|(s, s2)| McEstimate::from_sums(s, s2, trials))
            .collect(),
    })
}
