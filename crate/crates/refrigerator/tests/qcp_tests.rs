use channels::KrausChannel;
use num_complex::Complex64;
use qsim_core::CMat;
use refrigerator::*;

#[test]
fn compressor_unitary_matches_printed_matrix() {
    let u = qcp_unitary();
    // one-entries per row: (row, col)
    let ones = [(0, 0), (1, 4), (2, 2), (3, 1), (4, 3), (5, 7), (6, 6), (7, 5)];
    let mut want = CMat::zeros(8, 8);
    for (r, c) in ones {
        want[(r, c)] = Complex64::ONE;
    }
    assert_eq!(u, want);
    // row 1 has its single unit entry in column 4
    assert_eq!(u[(1, 4)], Complex64::ONE);

    // unitarity
    let dev = (u.adjoint() * &u - CMat::identity(8, 8))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    assert!(dev < 1e-14);
}

#[test]
fn compressor_is_cnot_then_cswap() {
    assert_eq!(qcp_unitary(), cswap_layer() * cnot_layer());
}

#[test]
fn compression_relation_matches_simulation() {
    for i in 0..=10 {
        let z = i as f64 / 10.0;
        let sim = simulate_qcp_unitary(z);
        assert!(
            (sim - qcp_relation_z(z)).abs() < 1e-12,
            "z={z}: sim {sim} vs relation {}",
            qcp_relation_z(z)
        );
    }
    assert!((simulate_qcp_unitary(0.1) - 0.1495).abs() < 1e-12);
}

#[test]
fn relation_fixed_points_and_values() {
    assert_eq!(qcp_relation_z(0.0), 0.0);
    assert_eq!(qcp_relation_z(1.0), 1.0);
    assert!((qcp_relation_z(0.1) - 0.1495).abs() < 1e-15);

    assert_eq!(qcp_relation_p(0.0), 0.0);
    assert_eq!(qcp_relation_p(1.0), 1.0);
    assert!((qcp_relation_p(0.3) - 0.216).abs() < 1e-15);
}

#[test]
fn relation_record_is_consistent() {
    let rel = CompressorRelation::from_z(0.4);
    assert_eq!(rel.p_in, 1.0 - rel.z_in);
    assert_eq!(rel.p_out, 1.0 - rel.z_out);
}

#[test]
fn monotone_compression_on_unit_interval() {
    for i in 0..=100 {
        let z = i as f64 / 100.0;
        assert!(qcp_relation_z(z) >= z - 1e-15, "shrank at z = {z}");
    }
}

#[test]
fn exact_cycle_counts() {
    assert_eq!(exact_cycle_count(0.5, 0.5).unwrap(), 0);
    // one cycle gives 0.1495 < 0.15, so two are needed
    assert_eq!(exact_cycle_count(0.1, 0.15).unwrap(), 2);
    assert_eq!(exact_cycle_count(0.1, 0.1495).unwrap(), 1);
    assert!(exact_cycle_count(0.1, 1.0).is_err());
    assert!(exact_cycle_count(0.0, 0.5).is_err());
}

#[test]
fn z_bound_value_and_soundness() {
    assert_eq!(cycle_bound_small_z(0.3, 0.3).unwrap(), 0.0);
    let b = cycle_bound_small_z(0.1, 0.6).unwrap();
    assert!((b - 6f64.ln() / 1.32f64.ln()).abs() < 1e-12);

    // ceil(bound) dominates the exact count across the grid
    for i in 1..=50 {
        let z_in = 0.01 * i as f64;
        let mut j = 1;
        loop {
            let z_out = z_in + 0.05 * j as f64;
            if z_out > 0.95 {
                break;
            }
            let exact = exact_cycle_count(z_in, z_out).unwrap();
            let bound = cycle_bound_small_z(z_in, z_out).unwrap().ceil() as u32;
            assert!(
                bound >= exact,
                "bound {bound} < exact {exact} at ({z_in}, {z_out})"
            );
            j += 1;
        }
    }
}

#[test]
fn p_bound_value_and_soundness() {
    assert_eq!(cycle_bound_small_p(0.2, 0.2).unwrap(), 0.0);
    let b = cycle_bound_small_p(0.3, 1e-6).unwrap();
    assert!((b - ((3e-6f64).ln() / 0.9f64.ln()).log2()).abs() < 1e-12);
    assert!(cycle_bound_small_p(0.34, 0.1).is_err());

    for i in 1..=32 {
        let p_in = 0.01 * i as f64;
        for e in 1..=6 {
            let p_out = p_in * 10f64.powi(-e);
            let exact = exact_cycle_count_p(p_in, p_out).unwrap();
            let bound = cycle_bound_small_p(p_in, p_out).unwrap().ceil() as u32;
            assert!(
                bound >= exact,
                "bound {bound} < exact {exact} at ({p_in}, {p_out})"
            );
        }
    }
}

#[test]
fn hybrid_ratio_bound() {
    let b = ratio_bound_noiseless(0.05, 0.99, 0.1, 0.95).unwrap();
    assert!((b.alpha - 1.584962500721156).abs() < 1e-12);
    assert!((b.mu0 - 2.709511291351455).abs() < 1e-12);
    // the product form equals the closed form
    let closed =
        b.c * (-(3.0 * (1.0 - 0.99f64)).ln()).powf(b.alpha) / 0.05f64.powf(b.mu0 + b.delta1);
    assert!((b.total - closed).abs() < 1e-6 * b.total);

    // dominates the exact cycle count: R1 R2 R3 >= 3^k
    for (z_in, z_out) in [(0.05, 0.99), (0.02, 0.999), (0.09, 0.97)] {
        let b = ratio_bound_noiseless(z_in, z_out, 0.1, 0.95).unwrap();
        let k = exact_cycle_count(z_in, z_out).unwrap();
        assert!(
            b.total >= 3f64.powi(k as i32),
            "bound {} < 3^{k} for ({z_in}, {z_out})",
            b.total
        );
    }

    assert!(ratio_bound_noiseless(0.2, 0.99, 0.1, 0.95).is_err()); // ordering
    assert!(ratio_bound_noiseless(0.05, 0.7, 0.1, 0.65).is_err()); // z2 <= 2/3
}

#[test]
fn noiseless_channel_reduces_to_ideal_relation() {
    let id = KrausChannel::identity();
    for z in [0.0, 0.1, 0.4, 0.8] {
        let sim = simulate_noisy_qcp(&id, z).unwrap();
        assert!((sim - qcp_relation_z(z)).abs() < 1e-12);
    }
    for p in [0.0, 0.1, 0.3] {
        let sim = simulate_noisy_qcp_p(&id, p).unwrap();
        assert!((sim - qcp_relation_p(p)).abs() < 1e-12);
    }
}

#[test]
fn noisy_compressor_stays_close_for_weak_noise() {
    // |noisy - ideal| <= c kappa over a decade of gamma
    let mut worst_ratio: f64 = 0.0;
    for gamma in [1e-4, 1e-3, 1e-2] {
        let ch = KrausChannel::generalized_damping(gamma, 0.8).unwrap();
        let kappa = ch.metrics().unwrap().kappa;
        for z in [0.0, 0.2, 0.5] {
            let d = (simulate_noisy_qcp(&ch, z).unwrap() - qcp_relation_z(z)).abs();
            worst_ratio = worst_ratio.max(d / kappa);
        }
    }
    assert!(worst_ratio < 10.0, "deviation/kappa = {worst_ratio}");
}

#[test]
fn noisy_output_at_zero_polarization_is_noise_scale() {
    let ch = KrausChannel::generalized_damping(0.01, 0.8).unwrap();
    let m = ch.metrics().unwrap();
    let z0 = simulate_noisy_qcp(&ch, 0.0).unwrap();
    // bounded by the noisy-compression constant scale b kappa eta
    assert!(z0.abs() <= 10.0 * m.kappa * m.eta, "z0 = {z0}");
    // and in particular consistent with the lower bound -b kappa eta
    assert!(z0 >= -10.0 * m.kappa * m.eta);
}
