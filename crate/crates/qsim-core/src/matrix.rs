use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::CoreError;

/// Dense complex matrix used everywhere in the workspace.
pub type CMat = DMatrix<Complex64>;

/// Largest per-axis dimension `kron` will produce (2^16).
pub const MAX_AXIS_DIM: usize = 1 << 16;

/// Kronecker product `a (x) b`, with `a` the more significant tensor factor.
pub fn kron(a: &CMat, b: &CMat) -> Result<CMat, CoreError> {
    if !is_finite(a) || !is_finite(b) {
        return Err(CoreError::NonFinite);
    }
    let rows = a.nrows().checked_mul(b.nrows());
    let cols = a.ncols().checked_mul(b.ncols());
    match (rows, cols) {
        (Some(r), Some(c)) if r <= MAX_AXIS_DIM && c <= MAX_AXIS_DIM => Ok(a.kronecker(b)),
        _ => Err(CoreError::DimensionOverflow),
    }
}

/// `true` when every entry is finite.
pub fn is_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Trace norm (sum of singular values) of a square matrix.
pub fn trace_norm(m: &CMat) -> Result<f64, CoreError> {
    if m.nrows() != m.ncols() {
        return Err(CoreError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let sv = m.clone().singular_values();
    Ok(sv.iter().sum())
}

/// Squared Frobenius norm, `Tr(M^dag M) = sum |m_ij|^2`.
pub fn hs_norm_sq(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Bit position of qubit `q` in an `n`-qubit basis index (qubit 0 = MSB).
#[inline]
pub(crate) fn bit_pos(q: usize, n: usize) -> usize {
    n - 1 - q
}

/// Basis-index offsets realised by a k-qubit operator sub-index `s` on the
/// listed qubits; `qubits[0]` is the operator's own most significant qubit.
fn subset_offsets(qubits: &[usize], n: usize) -> Vec<usize> {
    let k = qubits.len();
    let dim = 1usize << k;
    let mut offsets = vec![0usize; dim];
    for (s, off) in offsets.iter_mut().enumerate() {
        let mut o = 0usize;
        for (j, &q) in qubits.iter().enumerate() {
            if (s >> (k - 1 - j)) & 1 == 1 {
                o |= 1 << bit_pos(q, n);
            }
        }
        *off = o;
    }
    offsets
}

/// Basis indices whose bits vanish on all `qubits` positions.
fn base_indices(qubits: &[usize], n: usize) -> Vec<usize> {
    let mask: usize = qubits.iter().map(|&q| 1usize << bit_pos(q, n)).sum();
    let count = 1usize << (n - qubits.len());
    let mut out = Vec::with_capacity(count);
    let mut idx = 0usize;
    loop {
        out.push(idx);
        if out.len() == count {
            break;
        }
        idx = ((idx | mask) + 1) & !mask;
    }
    out
}

/// In place: `a <- (op (x) I) a`, with `op` acting on `qubits` of an n-qubit system.
pub fn left_mul_on_subset(a: &mut CMat, op: &CMat, qubits: &[usize], n: usize) {
    let dim = 1usize << n;
    debug_assert_eq!(a.nrows(), dim);
    debug_assert_eq!(a.ncols(), dim);
    let kd = 1usize << qubits.len();
    debug_assert_eq!(op.nrows(), kd);
    let offsets = subset_offsets(qubits, n);
    let bases = base_indices(qubits, n);
    let ops = op.as_slice(); // column-major: op[(r,c)] = ops[r + c*kd]
    let data = a.as_mut_slice();
    let mut tin = vec![Complex64::ZERO; kd];
    for c in 0..dim {
        let col = &mut data[c * dim..(c + 1) * dim];
        for &base in &bases {
            for (s, t) in tin.iter_mut().enumerate() {
                *t = col[base + offsets[s]];
            }
            for sp in 0..kd {
                let mut acc = Complex64::ZERO;
                for (s, t) in tin.iter().enumerate() {
                    acc += ops[sp + s * kd] * t;
                }
                col[base + offsets[sp]] = acc;
            }
        }
    }
}

/// In place: `a <- a (op^dag (x) I)`.
pub fn right_mul_adj_on_subset(a: &mut CMat, op: &CMat, qubits: &[usize], n: usize) {
    let dim = 1usize << n;
    let kd = 1usize << qubits.len();
    let offsets = subset_offsets(qubits, n);
    let bases = base_indices(qubits, n);
    let opc: Vec<Complex64> = op.iter().map(|z| z.conj()).collect(); // column-major
    let data = a.as_mut_slice();
    let mut tin = vec![Complex64::ZERO; kd];
    for &base in &bases {
        for r in 0..dim {
            for (s, t) in tin.iter_mut().enumerate() {
                *t = data[r + (base + offsets[s]) * dim];
            }
            for sp in 0..kd {
                let mut acc = Complex64::ZERO;
                for (s, t) in tin.iter().enumerate() {
                    // (A M^dag)[r,c_sp] = sum_s A[r,c_s] conj(M[sp,s])
                    acc += t * opc[sp + s * kd];
                }
                data[r + (base + offsets[sp]) * dim] = acc;
            }
        }
    }
}

/// In place conjugation `a <- (op (x) I) a (op^dag (x) I)`.
pub fn conjugate_on_subset(a: &mut CMat, op: &CMat, qubits: &[usize], n: usize) {
    left_mul_on_subset(a, op, qubits, n);
    right_mul_adj_on_subset(a, op, qubits, n);
}

/// `sum_i (K_i (x) I) a (K_i^dag (x) I)` over the given Kraus list.
pub fn apply_kraus_on_subset(a: &CMat, kraus: &[CMat], qubits: &[usize], n: usize) -> CMat {
    let mut out = CMat::zeros(a.nrows(), a.ncols());
    for k in kraus {
        let mut term = a.clone();
        conjugate_on_subset(&mut term, k, qubits, n);
        out += term;
    }
    out
}

/// Conjugate by a unitary on a subset, returning a new matrix.
pub fn apply_on_subset(a: &CMat, op: &CMat, qubits: &[usize], n: usize) -> CMat {
    let mut out = a.clone();
    conjugate_on_subset(&mut out, op, qubits, n);
    out
}

/// Partial trace over all qubits *not* in `keep_mask` (bit q set keeps qubit q).
///
/// The result keeps the relative order of the kept qubits.
pub fn partial_trace_mat(a: &CMat, n: usize, keep_mask: u32) -> CMat {
    let keep: Vec<usize> = (0..n).filter(|q| keep_mask >> q & 1 == 1).collect();
    let traced: Vec<usize> = (0..n).filter(|q| keep_mask >> q & 1 == 0).collect();
    let dk = 1usize << keep.len();
    let dt = 1usize << traced.len();
    let keep_off = subset_offsets(&keep, n);
    let tr_off = subset_offsets(&traced, n);
    let mut out = CMat::zeros(dk, dk);
    for ck in 0..dk {
        for rk in 0..dk {
            let mut acc = Complex64::ZERO;
            for t in 0..dt {
                acc += a[(keep_off[rk] + tr_off[t], keep_off[ck] + tr_off[t])];
            }
            out[(rk, ck)] = acc;
        }
    }
    out
}
