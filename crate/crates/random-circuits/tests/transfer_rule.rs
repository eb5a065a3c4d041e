use std::collections::BTreeMap;

use channels::KrausChannel;
use num_complex::Complex64;
use qsim_core::{c64, ginibre, kron, CMat, QubitSubset, RngStream};
use random_circuits::*;

fn two_qubit_product(ch: &KrausChannel) -> KrausChannel {
    ch.tensor_power(2).unwrap()
}

/// Brute-force tensor-index oracle for (u, v): explicit loops over the
/// component indices of `Omega = (G n Omega) (x) (Omega \ G)`, with the
/// G n Omega factor in the leading position of the 2-qubit operators.
fn uv_oracle_2q(kraus: &[CMat], g_first: bool) -> (f64, f64) {
    // index (alpha, a): alpha on the first qubit, a on the second; when
    // g_first the subset qubit is the first factor.
    let idx = |alpha: usize, a: usize| -> usize {
        if g_first {
            2 * alpha + a
        } else {
            2 * a + alpha
        }
    };
    // u = (1/(N_W N_{W\G})) sum_{alpha beta} | sum_a [sum_i K K^dag]_{(alpha a),(beta a)} |^2
    let mut sum_kk = CMat::zeros(4, 4);
    for k in kraus {
        sum_kk += k * k.adjoint();
    }
    let mut u = 0.0;
    for alpha in 0..2 {
        for beta in 0..2 {
            let mut acc = Complex64::ZERO;
            for a in 0..2 {
                acc += sum_kk[(idx(alpha, a), idx(beta, a))];
            }
            u += acc.norm_sqr();
        }
    }
    u /= 4.0 * 2.0;
    // v = (1/(N_W N_{GnW})) sum_ij sum_{a b} | sum_alpha [K_i K_j^dag]_{(alpha a),(alpha b)} |^2
    let mut v = 0.0;
    for ki in kraus {
        for kj in kraus {
            let prod = ki * kj.adjoint();
            for a in 0..2 {
                for b in 0..2 {
                    let mut acc = Complex64::ZERO;
                    for alpha in 0..2 {
                        acc += prod[(idx(alpha, a), idx(alpha, b))];
                    }
                    v += acc.norm_sqr();
                }
            }
        }
    }
    v /= 4.0 * 2.0;
    (u, v)
}

#[test]
fn uv_identity_channel() {
    let id2 = two_qubit_product(&KrausChannel::identity());
    let omega = QubitSubset::from_qubits(&[1, 2]);
    let g = QubitSubset::from_qubits(&[0, 1]); // G n Omega = {1}, Omega \ G = {2}
    let (u, v) = uv_params(id2.kraus_ops(), omega, g).unwrap();
    assert!((u - 1.0).abs() < 1e-13, "u = {u}");
    assert!((v - 1.0).abs() < 1e-13, "v = {v}");
}

#[test]
fn uv_matches_index_oracle_for_depolarizing() {
    let dep2 = two_qubit_product(&KrausChannel::depolarizing(0.1).unwrap());
    let omega = QubitSubset::from_qubits(&[0, 1]);
    // G n Omega = {0}: the subset qubit is the first tensor factor
    let g = QubitSubset::from_qubits(&[0, 3]);
    let (u, v) = uv_params(dep2.kraus_ops(), omega, g).unwrap();
    let (u_o, v_o) = uv_oracle_2q(dep2.kraus_ops(), true);
    assert!((u - u_o).abs() < 1e-12, "u {u} vs oracle {u_o}");
    assert!((v - v_o).abs() < 1e-12, "v {v} vs oracle {v_o}");

    // and with the subset qubit in the second factor
    let g2 = QubitSubset::from_qubits(&[1, 3]);
    let (u2, v2) = uv_params(dep2.kraus_ops(), omega, g2).unwrap();
    let (u_o2, v_o2) = uv_oracle_2q(dep2.kraus_ops(), false);
    assert!((u2 - u_o2).abs() < 1e-12);
    assert!((v2 - v_o2).abs() < 1e-12);
}

#[test]
fn uv_completeness_diagonal_term() {
    // the i = j slice of v's sum is tied to completeness: for G n Omega = Omega
    // it contains sum_i |Tr K_i K_i^dag|^2 >= (Tr I)^2 / #K by Cauchy-Schwarz;
    // sanity-check v > 0 for every constructor
    for ch in [
        KrausChannel::depolarizing(0.3).unwrap(),
        KrausChannel::generalized_damping(0.4, 0.7).unwrap(),
    ] {
        let prod = two_qubit_product(&ch);
        let omega = QubitSubset::from_qubits(&[0, 1]);
        let g = QubitSubset::from_qubits(&[0]);
        let (_, v) = uv_params(prod.kraus_ops(), omega, g).unwrap();
        assert!(v > 0.0);
    }
}

#[test]
fn noiseless_cross_coefficients() {
    // one qubit inside, one outside: c1 = c2 = q/(q^2+1) for unitary noise
    let (c1, c2) = step_coefficients(4, 2, 2, 1.0, 1.0).unwrap();
    assert!((c1 - 0.4).abs() < 1e-14, "c1 = {c1}");
    assert!((c2 - 0.4).abs() < 1e-14);

    // u = v with square overlap gives c1 = c2
    let (c1, c2) = step_coefficients(4, 2, 2, 1.37, 1.37).unwrap();
    assert!((c1 - c2).abs() < 1e-14);

    assert!(step_coefficients(4, 2, 1, 1.0, 1.0).is_err());
}

#[test]
fn evolve_outside_gate_is_identity() {
    let dep2 = two_qubit_product(&KrausChannel::depolarizing(0.2).unwrap());
    let g = QubitSubset::from_qubits(&[0, 1]);
    let state = initial_distances(4, 0b0000, 0b0011, &[g]).unwrap();
    let out = evolve_subset(&state, QubitSubset::from_qubits(&[2, 3]), dep2.kraus_ops()).unwrap();
    assert_eq!(out.get(g), state.get(g));
}

#[test]
fn evolve_case1_unitary_noise_preserves() {
    // a Haar-random unitary as the "noise": S_G invariant when G = Omega
    let u = qsim_core::haar_unitary(4, &RngStream::new(42, 0)).unwrap();
    let uni = KrausChannel::new(vec![u]).unwrap();
    let g = QubitSubset::from_qubits(&[1, 2]);
    let tracked = [
        g,
        QubitSubset::from_qubits(&[0, 3]),
        QubitSubset::from_qubits(&[0, 1, 2, 3]),
    ];
    let state = initial_distances(4, 0, 0b0110, &tracked).unwrap();
    let out = evolve_subset(&state, g, uni.kraus_ops()).unwrap();
    assert!((out.get(g).unwrap() - state.get(g).unwrap()).abs() < 1e-12);
}

#[test]
fn evolve_missing_subset_reported() {
    let dep2 = two_qubit_product(&KrausChannel::depolarizing(0.2).unwrap());
    let g = QubitSubset::from_qubits(&[0, 1]);
    let state = initial_distances(4, 0, 0b1111, &[g]).unwrap();
    let err = evolve_subset(&state, QubitSubset::from_qubits(&[1, 2]), dep2.kraus_ops());
    match err {
        Err(RcError::FamilyNotClosed(msg)) => {
            assert!(msg.contains("{0}") && msg.contains("{0,1,2}"), "{msg}");
        }
        other => panic!("expected closure error, got {other:?}"),
    }
}

#[test]
fn closure_is_closed_and_capped() {
    let gates = [
        QubitSubset::from_qubits(&[0, 1]),
        QubitSubset::from_qubits(&[1, 2]),
        QubitSubset::from_qubits(&[2, 3]),
        QubitSubset::from_qubits(&[3, 0]),
    ];
    let seeds = [QubitSubset::from_qubits(&[0, 1])];
    let fam = closure_under_gates(4, &seeds, &gates).unwrap();
    for g in &fam {
        for w in &gates {
            for h in [g.difference(*w), g.union(*w)] {
                assert!(h.is_empty() || fam.contains(&h), "family not closed at {h}");
            }
        }
    }
}

#[test]
fn initial_distances_follow_bit_differences() {
    let tracked = [
        QubitSubset::from_qubits(&[0]),
        QubitSubset::from_qubits(&[1]),
        QubitSubset::from_qubits(&[0, 1]),
    ];
    let s = initial_distances(2, 0b00, 0b01, &tracked).unwrap(); // differ on qubit 0
    assert_eq!(s.get(tracked[0]), Some(1.0));
    assert_eq!(s.get(tracked[1]), Some(0.0));
    assert_eq!(s.get(tracked[2]), Some(1.0));
    assert_eq!(s.get(QubitSubset::EMPTY), Some(0.0));
}

#[test]
fn single_gate_prediction_matches_mc() {
    // n = 4, one gate on {1,2}, depolarizing product noise; initial strings
    // differ everywhere; compare the three alignment cases against MC
    let noise1 = KrausChannel::depolarizing(0.2).unwrap();
    let noise2 = two_qubit_product(&noise1);
    let omega = QubitSubset::from_qubits(&[1, 2]);
    let arch = Architecture::Custom(vec![vec![(1, 2)]]);

    let subsets = [
        QubitSubset::from_qubits(&[1, 2]),    // case 1
        QubitSubset::from_qubits(&[0, 1]),    // case 2
        QubitSubset::from_qubits(&[0, 3]),    // case 3
        QubitSubset::from_qubits(&[0]),       // closure
        QubitSubset::from_qubits(&[0, 1, 2]), // closure
        QubitSubset::from_qubits(&[0, 1, 2, 3]),
        QubitSubset::from_qubits(&[0, 2, 3]),
        QubitSubset::from_qubits(&[0, 1, 3]),
    ];
    let closed = closure_under_gates(4, &subsets, &[omega]).unwrap();
    let state = initial_distances(4, 0, 0b1111, &closed).unwrap();
    let predicted = evolve_subset(&state, omega, noise2.kraus_ops()).unwrap();

    let mc = mc_subset_profile(
        4,
        &arch,
        &noise2,
        &subsets[..3],
        0,
        0b1111,
        1,
        4000,
        &RngStream::new(7, 0),
    )
    .unwrap();
    for (i, g) in subsets[..3].iter().enumerate() {
        let want = predicted.get(*g).unwrap();
        let est = mc[0][i];
        let tol = 4.0 * est.stderr + 1e-12;
        assert!(
            (est.mean - want).abs() <= tol,
            "{g}: mc {} +- {} vs predicted {want}",
            est.mean,
            est.stderr
        );
    }
}

#[test]
fn two_qubit_params_identity() {
    let id2 = two_qubit_product(&KrausChannel::identity());
    let p = two_qubit_params(id2.kraus_ops()).unwrap();
    assert!((p.a - 1.0).abs() < 1e-13);
    assert!((p.b - 1.0).abs() < 1e-13);
    assert!((p.a_cross - 1.0).abs() < 1e-13);
    assert!((p.b_cross - 1.0).abs() < 1e-13);
    assert!((p.case1_r - 1.0).abs() < 1e-13);
    assert!((p.case1_alpha - 1.0).abs() < 1e-13);
    assert!((p.case2_mu).abs() < 1e-13);
    // noiseless cross rule: beta/2 = q/(q^2+1) = 0.4
    assert!((0.5 * p.case2_beta - 0.4).abs() < 1e-13);
    assert!(p.gamma_upper.abs() < 1e-12);
    assert!((p.gamma_lower + (0.16f64).ln()).abs() < 1e-12);
}

#[test]
fn two_qubit_params_match_master_formula() {
    // the case rules must agree with the general (c1, c2) coefficients
    for ch1 in [
        KrausChannel::depolarizing(0.25).unwrap(),
        KrausChannel::generalized_damping(0.3, 0.8).unwrap(),
        KrausChannel::replacement(0.2, &qsim_core::DensityMatrix::polarized(0.6).unwrap())
            .unwrap(),
    ] {
        let prod = two_qubit_product(&ch1);
        let p = two_qubit_params(prod.kraus_ops()).unwrap();
        let omega = QubitSubset::from_qubits(&[0, 1]);

        // case 1, G = Omega: S' = c2 S with c2 = r
        let (u, v) = uv_params(prod.kraus_ops(), omega, omega).unwrap();
        let (c1, c2) = step_coefficients(4, 1, 4, u, v).unwrap();
        assert!((c2 - p.case1_r).abs() < 1e-12, "r {} vs c2 {c2}", p.case1_r);
        assert!(
            (c1 + c2 - p.case1_alpha).abs() < 1e-12,
            "alpha {} vs c1+c2 {}",
            p.case1_alpha,
            c1 + c2
        );

        // case 2, G n Omega = one qubit: (c1, c2) = ((beta+mu)/2, (beta-mu)/2)
        let g = QubitSubset::from_qubits(&[0, 2]);
        let (u, v) = uv_params(prod.kraus_ops(), omega, g).unwrap();
        let (c1, c2) = step_coefficients(4, 2, 2, u, v).unwrap();
        assert!(
            (c1 - 0.5 * (p.case2_beta + p.case2_mu)).abs() < 1e-12,
            "c1 {c1} vs (beta+mu)/2 {}",
            0.5 * (p.case2_beta + p.case2_mu)
        );
        assert!((c2 - 0.5 * (p.case2_beta - p.case2_mu)).abs() < 1e-12);
    }
}

#[test]
fn asymmetric_channel_rejected() {
    // damping on one qubit only is not swap symmetric
    let damp = KrausChannel::generalized_damping(0.4, 1.0).unwrap();
    let id = KrausChannel::identity();
    let mut ops = Vec::new();
    for a in damp.kraus_ops() {
        for b in id.kraus_ops() {
            ops.push(kron(a, b).unwrap());
        }
    }
    assert!(matches!(
        two_qubit_params(&ops),
        Err(RcError::AsymmetricChannel(_))
    ));
}

#[test]
fn bound_curves_at_depth_zero() {
    let prod = two_qubit_product(&KrausChannel::generalized_damping(0.2, 1.0).unwrap());
    let p = two_qubit_params(prod.kraus_ops()).unwrap();
    assert_eq!(lower_bound_curve(&p, 0), 1.0);
    assert_eq!(upper_bound_curve(&p, 6, 0), 8.0);
}

#[test]
fn gamma_monotone_in_damping_strength() {
    let mut prev = 0.0;
    for i in 0..=10 {
        let gamma = 0.05 * i as f64;
        let ch = if gamma == 0.0 {
            KrausChannel::identity()
        } else {
            KrausChannel::generalized_damping(gamma, 1.0).unwrap()
        };
        let p = two_qubit_params(two_qubit_product(&ch).kraus_ops()).unwrap();
        assert!(
            p.gamma_lower >= prev - 1e-12,
            "Gamma dropped at gamma = {gamma}: {} < {prev}",
            p.gamma_lower
        );
        prev = p.gamma_lower;
    }
}

#[test]
fn mc_noiseless_full_set_distance_is_conserved() {
    let id2 = two_qubit_product(&KrausChannel::identity());
    let f = QubitSubset::full(4);
    let prof = mc_subset_profile(
        4,
        &Architecture::Brickwork1d,
        &id2,
        &[f],
        0,
        0b1010,
        3,
        8,
        &RngStream::new(5, 5),
    )
    .unwrap();
    for row in prof {
        assert!((row[0].mean - 1.0).abs() < 1e-9);
        assert!(row[0].stderr < 1e-6);
    }
}

#[test]
fn mc_haar_invariance_under_frame_change() {
    // conjugating the noise Kraus ops and the initial difference by the same
    // product unitary leaves every marginal distance distribution unchanged
    let noise1 = KrausChannel::generalized_damping(0.3, 0.9).unwrap();
    let noise2 = two_qubit_product(&noise1);
    let u1 = qsim_core::haar_unitary(2, &RngStream::new(999, 0)).unwrap();
    let conj1 = noise1.conjugated(&u1).unwrap();
    let conj2 = conj1.tensor_power(2).unwrap();

    let n = 4;
    let g = QubitSubset::from_qubits(&[0, 1]);
    let trials = 3000;
    let base = mc_subset_profile(
        n,
        &Architecture::Brickwork1d,
        &noise2,
        &[g],
        0,
        0b1111,
        2,
        trials,
        &RngStream::new(21, 0),
    )
    .unwrap();

    // rotate the initial difference into the new frame
    let mut big_u = u1.clone();
    for _ in 1..n {
        big_u = kron(&big_u, &u1).unwrap();
    }
    let dim = 1 << n;
    let mut x0 = CMat::zeros(dim, dim);
    x0[(bitstring_index(n, 0), bitstring_index(n, 0))] = c64(1.0, 0.0);
    let ib = bitstring_index(n, 0b1111);
    x0[(ib, ib)] -= c64(1.0, 0.0);
    let x0 = &big_u * x0 * big_u.adjoint();
    let rotated = mc_subset_profile_from(
        n,
        &Architecture::Brickwork1d,
        &conj2,
        &[g],
        &x0,
        2,
        trials,
        &RngStream::new(22, 1),
    )
    .unwrap();

    for d in 0..2 {
        let (a, b) = (base[d][0], rotated[d][0]);
        let tol = 3.0 * (a.stderr.hypot(b.stderr)) + 1e-12;
        assert!(
            (a.mean - b.mean).abs() <= tol,
            "depth {d}: {} vs {}",
            a.mean,
            b.mean
        );
    }
}

#[test]
fn predicted_distances_stay_nonnegative() {
    // random channel, several layers: the tracker never goes negative
    let mut rng = RngStream::new(31, 1).rng();
    // random CPTP from a Stinespring-like construction
    let g1 = ginibre(2, 2, &mut rng);
    let g2 = ginibre(2, 2, &mut rng);
    let m = g1.adjoint() * &g1 + g2.adjoint() * &g2;
    let eig = m.symmetric_eigen();
    let mut inv_sqrt = CMat::zeros(2, 2);
    for i in 0..2 {
        let v = eig.eigenvectors.column(i);
        inv_sqrt += (v * v.adjoint()) * c64(1.0 / eig.eigenvalues[i].sqrt(), 0.0);
    }
    let ch = KrausChannel::new(vec![&g1 * &inv_sqrt, &g2 * &inv_sqrt]).unwrap();
    let prod = ch.tensor_power(2).unwrap();

    let gates = [
        QubitSubset::from_qubits(&[0, 1]),
        QubitSubset::from_qubits(&[1, 2]),
        QubitSubset::from_qubits(&[2, 3]),
    ];
    let seeds: Vec<QubitSubset> = (1u32..16).map(QubitSubset).collect();
    let fam = closure_under_gates(4, &seeds, &gates).unwrap();
    let mut state = initial_distances(4, 0, 0b0101, &fam).unwrap();
    for layer in 0..6 {
        state = evolve_subset(&state, gates[layer % 3], prod.kraus_ops()).unwrap();
        for (g, s) in &state.table {
            assert!(*s >= -1e-12, "negative S at {g}: {s}");
        }
    }
}

#[test]
fn subset_budget_enforced() {
    let table: BTreeMap<QubitSubset, f64> = (1u32..6000).map(|b| (QubitSubset(b), 0.0)).collect();
    assert!(matches!(
        SubsetDistanceVector::new(13, table),
        Err(RcError::SubsetBudget(_))
    ));
}
