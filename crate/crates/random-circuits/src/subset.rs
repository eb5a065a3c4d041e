use std::collections::{BTreeMap, BTreeSet};

use qsim_core::{hs_norm_sq, partial_trace_mat, CMat, QubitSubset};

use crate::RcError;

/// Hard cap on the number of tracked subsets per run.
pub const MAX_TRACKED_SUBSETS: usize = 4096;

/// The state of the transfer calculus: a map from tracked qubit subsets `G`
/// to the marginal HS distance `S_G`. The empty set is implicitly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetDistanceVector {
    pub n: usize,
    pub table: BTreeMap<QubitSubset, f64>,
}

impl SubsetDistanceVector {
    pub fn new(n: usize, table: BTreeMap<QubitSubset, f64>) -> Result<Self, RcError> {
        if table.len() > MAX_TRACKED_SUBSETS {
            return Err(RcError::SubsetBudget(table.len()));
        }
        for (g, v) in &table {
            g.check_in(n)?;
            if *v < 0.0 {
                return Err(RcError::InvalidArgument(format!(
                    "negative distance {v} for subset {g}"
                )));
            }
        }
        Ok(Self { n, table })
    }

    pub fn get(&self, g: QubitSubset) -> Option<f64> {
        if g.is_empty() {
            Some(0.0)
        } else {
            self.table.get(&g).copied()
        }
    }
}

/// `S_{G,0}` for a pair of computational bitstrings: 1 where the restrictions
/// to `G` differ, 0 elsewhere. Bit `q` of the masks is the value of qubit `q`.
pub fn initial_distances(
    n: usize,
    bits_a: u32,
    bits_b: u32,
    tracked: &[QubitSubset],
) -> Result<SubsetDistanceVector, RcError> {
    let mut table = BTreeMap::new();
    for g in tracked {
        let differ = (bits_a ^ bits_b) & g.bits() != 0;
        table.insert(*g, if differ { 1.0 } else { 0.0 });
    }
    SubsetDistanceVector::new(n, table)
}

/// Closes a subset family under `G -> {G \ Omega, G u Omega}` for the given
/// gate sequence, up to the tracking budget.
pub fn closure_under_gates(
    n: usize,
    seeds: &[QubitSubset],
    gates: &[QubitSubset],
) -> Result<Vec<QubitSubset>, RcError> {
    let mut family: BTreeSet<QubitSubset> = seeds.iter().copied().collect();
    family.remove(&QubitSubset::EMPTY);
    loop {
        let mut grew = false;
        let snapshot: Vec<QubitSubset> = family.iter().copied().collect();
        for g in snapshot {
            for omega in gates {
                for h in [g.difference(*omega), g.union(*omega)] {
                    if !h.is_empty() && family.insert(h) {
                        grew = true;
                    }
                }
            }
        }
        if family.len() > MAX_TRACKED_SUBSETS {
            return Err(RcError::SubsetBudget(family.len()));
        }
        if !grew {
            break;
        }
    }
    for g in &family {
        g.check_in(n)?;
    }
    Ok(family.into_iter().collect())
}

/// The noise parameters `(u, v)` of a gate on `omega` for a tracked subset
/// `g`, from the Kraus list of the gate's noise channel (operators of
/// dimension `2^|omega|`, qubit order = ascending global index):
///
/// ```text
/// u = Tr_{G n W} | Tr_{W \ G} sum_i K_i K_i^dag |^2 / (N_W N_{W\G})
/// v = sum_ij Tr_{W \ G} | Tr_{G n W} K_i K_j^dag |^2 / (N_W N_{GnW})
/// ```
///
/// with `W = omega`. For the identity channel both equal 1.
pub fn uv_params(
    kraus: &[CMat],
    omega: QubitSubset,
    g: QubitSubset,
) -> Result<(f64, f64), RcError> {
    if omega.is_empty() {
        return Err(RcError::InvalidArgument("empty gate support".into()));
    }
    let m = omega.len();
    let dim = 1usize << m;
    if kraus.is_empty() || kraus[0].nrows() != dim {
        return Err(RcError::InvalidArgument(format!(
            "Kraus operators must be {dim}x{dim} for a gate on {omega}"
        )));
    }
    // positions of omega's qubits inside the operator (ascending global order)
    let omega_qubits = omega.qubits();
    let in_mask = |set: QubitSubset| -> u32 {
        let mut mask = 0u32;
        for (pos, q) in omega_qubits.iter().enumerate() {
            if set.contains(*q) {
                mask |= 1 << pos;
            }
        }
        mask
    };
    let keep_gno = in_mask(g.intersection(omega)); // G n Omega, within-op bits
    let keep_wng = in_mask(omega.difference(g)); // Omega \ G, within-op bits

    let n_w = dim as f64;
    let n_wng = (1usize << omega.difference(g).len()) as f64;
    let n_gnw = (1usize << g.intersection(omega).len()) as f64;

    // u: trace out Omega\G of N(I)'s Kraus square, then HS-square on G n Omega
    let mut sum_kk = CMat::zeros(dim, dim);
    for k in kraus {
        sum_kk += k * k.adjoint();
    }
    let reduced = partial_trace_mat(&sum_kk, m, keep_gno);
    let u = hs_norm_sq(&reduced) / (n_w * n_wng);

    // v: per-pair reduced cross products on Omega \ G
    let mut v_num = 0.0;
    for ki in kraus {
        for kj in kraus {
            let prod = ki * kj.adjoint();
            let reduced = partial_trace_mat(&prod, m, keep_wng);
            v_num += hs_norm_sq(&reduced);
        }
    }
    let v = v_num / (n_w * n_gnw);
    Ok((u, v))
}

/// Coefficients of the linear update rule,
/// `c1 = N_{GnW}(N_{W\G}^2 u - v)/(N_W^2 - 1)` and
/// `c2 = N_{W\G}(N_{GnW}^2 v - u)/(N_W^2 - 1)`.
pub fn step_coefficients(
    n_omega: usize,
    n_omega_minus_g: usize,
    n_g_cap_omega: usize,
    u: f64,
    v: f64,
) -> Result<(f64, f64), RcError> {
    if n_omega != n_omega_minus_g * n_g_cap_omega {
        return Err(RcError::InvalidArgument(format!(
            "dimension mismatch: {n_omega} != {n_omega_minus_g} * {n_g_cap_omega}"
        )));
    }
    if n_omega < 2 {
        return Err(RcError::InvalidArgument("gate support too small".into()));
    }
    let nw = n_omega as f64;
    let nwg = n_omega_minus_g as f64;
    let ngw = n_g_cap_omega as f64;
    let den = nw * nw - 1.0;
    let c1 = ngw * (nwg * nwg * u - v) / den;
    let c2 = nwg * (ngw * ngw * v - u) / den;
    Ok((c1, c2))
}

/// One exact Haar-averaged update: every tracked `G` is replaced by
/// `c1 S_{G\W} + c2 S_{GuW}`; a gate disjoint from `G` leaves `S_G` as is.
pub fn evolve_subset(
    state: &SubsetDistanceVector,
    omega: QubitSubset,
    kraus: &[CMat],
) -> Result<SubsetDistanceVector, RcError> {
    omega.check_in(state.n)?;
    // coefficients depend on G only through its overlap pattern with omega
    let mut coeff_cache: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
    let mut table = BTreeMap::new();
    let mut missing: Vec<String> = Vec::new();
    for (&g, &s) in &state.table {
        let inter = g.intersection(omega);
        if inter.is_empty() {
            table.insert(g, s);
            continue;
        }
        let (c1, c2) = match coeff_cache.get(&inter.bits()) {
            Some(&c) => c,
            None => {
                let (u, v) = uv_params(kraus, omega, g)?;
                let c = step_coefficients(
                    1 << omega.len(),
                    1 << omega.difference(g).len(),
                    1 << inter.len(),
                    u,
                    v,
                )?;
                coeff_cache.insert(inter.bits(), c);
                c
            }
        };
        let lo = state.get(g.difference(omega));
        let hi = state.get(g.union(omega));
        if lo.is_none() {
            missing.push(g.difference(omega).to_string());
        }
        if hi.is_none() {
            missing.push(g.union(omega).to_string());
        }
        let (Some(lo), Some(hi)) = (lo, hi) else {
            continue;
        };
        let next = c1 * lo + c2 * hi;
        if next < -1e-12 {
            return Err(RcError::InvalidArgument(format!(
                "negative predicted distance {next} at {g}"
            )));
        }
        table.insert(g, next.max(0.0));
    }
    if !missing.is_empty() {
        missing.sort();
        missing.dedup();
        return Err(RcError::FamilyNotClosed(missing.join(", ")));
    }
    SubsetDistanceVector::new(state.n, table)
}

/// Computes `1/2 || Tr_{F\G} m ||_2^2` of an n-qubit matrix.
pub fn marginal_hs_sq(m: &CMat, n: usize, g: QubitSubset) -> f64 {
    0.5 * hs_norm_sq(&partial_trace_mat(m, n, g.bits()))
}
