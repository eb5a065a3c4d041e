use num_complex::Complex64;
use proptest::prelude::*;
use qsim_core::{
    c64, diagonalize_state, ginibre, haar_unitary, hs_norm_sq, kron, pauli_z_expectation,
    trace_norm, CMat, DensityMatrix, QubitSubset, RngStream,
};

fn random_density(n_qubits: usize, seed: u64) -> DensityMatrix {
    let dim = 1 << n_qubits;
    let mut rng = RngStream::new(seed, 0).rng();
    let g = ginibre(dim, dim, &mut rng);
    let mut m = &g * g.adjoint();
    let tr = m.trace();
    m /= tr;
    let m = (&m + m.adjoint()) * c64(0.5, 0.0);
    DensityMatrix::new(m).unwrap()
}

fn random_traceless_hermitian(dim: usize, seed: u64) -> CMat {
    let mut rng = RngStream::new(seed, 1).rng();
    let g = ginibre(dim, dim, &mut rng);
    let mut h = (&g + g.adjoint()) * c64(0.5, 0.0);
    let shift = h.trace() / c64(dim as f64, 0.0);
    for i in 0..dim {
        h[(i, i)] -= shift;
    }
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trace_of_kron_factors(seed in any::<u64>(), na in 1usize..=4, nb in 1usize..=4) {
        let a = random_density(na, seed);
        let b = random_density(nb, seed.wrapping_add(1));
        let ab = kron(a.mat(), b.mat()).unwrap();
        let keep_a = QubitSubset::full(na);
        let full = DensityMatrix::new_unchecked(ab);
        let got = full.partial_trace(keep_a).unwrap();
        for (x, y) in got.mat().iter().zip(a.mat().iter()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn schatten_norm_inequalities(seed in any::<u64>(), n in 1usize..=3) {
        // S <= T and T^2 <= N S with S = ||M||_2^2 / 2 style normalizations:
        // here test the raw inequalities ||M||_2^2 <= ||M||_1 * ||M||_op-free
        // forms actually used: S := 0.5||M||_2^2, T := 0.5||M||_1; then
        // S <= T iff ||M||_2^2 <= ||M||_1 up to the shared scale of M.
        let dim = 1usize << n;
        let mut m = random_traceless_hermitian(dim, seed);
        // normalize to unit trace norm, mimicking a difference of states
        let t0 = trace_norm(&m).unwrap();
        prop_assume!(t0 > 1e-12);
        m /= Complex64::new(0.5 * t0, 0.0); // now 0.5||m||_1 = 1
        let t = 0.5 * trace_norm(&m).unwrap();
        let s = 0.5 * hs_norm_sq(&m);
        prop_assert!(s <= t + 1e-10, "S = {s} > T = {t}");
        prop_assert!(t * t <= dim as f64 * s + 1e-10, "T^2 = {} > N S = {}", t * t, dim as f64 * s);
    }

    #[test]
    fn haar_unitarity(seed in any::<u64>(), n in 1usize..=4) {
        let dim = 1usize << n;
        let u = haar_unitary(dim, &RngStream::new(seed, 7)).unwrap();
        let dev = (u.adjoint() * &u - CMat::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        prop_assert!(dev < 1e-10, "unitarity deviation {dev}");
    }

    #[test]
    fn diagonalization_never_decreases_polarization(seed in any::<u64>()) {
        let rho = random_density(1, seed);
        let z_before = pauli_z_expectation(&rho, 0).unwrap();
        let (_, diag) = diagonalize_state(&rho);
        let z_after = pauli_z_expectation(&diag, 0).unwrap();
        prop_assert!(z_after >= z_before - 1e-12, "{z_after} < {z_before}");
        prop_assert!(z_after >= -1e-12);
    }
}
