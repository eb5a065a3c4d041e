use channels::KrausChannel;
use qsim_core::{c64, haar_unitary, kron, CMat, DensityMatrix, RngStream};
use weingarten::*;

#[test]
fn fourth_moment_values() {
    // E|U00|^4 = 2/(N(N+1)) = 1/3 at N = 2
    let v = haar_fourth_moment(2, [0, 0, 0, 0, 0, 0, 0, 0]).unwrap();
    assert!((v - 1.0 / 3.0).abs() < 1e-15);
    // E|U00|^2 |U01|^2 = 1/(N(N+1)... = 1/6 at N = 2
    let v = haar_fourth_moment(2, [0, 0, 0, 0, 0, 1, 0, 1]).unwrap();
    assert!((v - 1.0 / 6.0).abs() < 1e-15);
    // unmatched delta pattern vanishes
    let v = haar_fourth_moment(2, [0, 0, 1, 0, 0, 1, 0, 0]).unwrap();
    assert_eq!(v, 0.0);
    assert!(haar_fourth_moment(1, [0; 8]).is_err());
}

#[test]
fn fourth_moment_matches_monte_carlo() {
    let trials = 60_000;
    let stream = RngStream::new(404, 0);
    let tuples: [[usize; 8]; 4] = [
        [0, 0, 0, 0, 1, 1, 1, 1],
        [0, 1, 0, 1, 1, 0, 1, 0],
        [0, 0, 1, 1, 1, 1, 0, 0],
        [0, 1, 1, 1, 1, 0, 0, 0],
    ];
    let mut sums = [c64(0.0, 0.0); 4];
    let mut sumsq = [0.0f64; 4];
    for t in 0..trials {
        let u = haar_unitary(2, &stream.substream(t as u64)).unwrap();
        for (k, idx) in tuples.iter().enumerate() {
            let z = u[(idx[0], idx[1])] * u[(idx[2], idx[3])].conj() * u[(idx[4], idx[5])]
                * u[(idx[6], idx[7])].conj();
            sums[k] += z;
            sumsq[k] += z.re * z.re;
        }
    }
    for (k, idx) in tuples.iter().enumerate() {
        let mean = sums[k] / trials as f64;
        let var = (sumsq[k] / trials as f64 - mean.re * mean.re).max(0.0);
        let se = (var / trials as f64).sqrt();
        let want = haar_fourth_moment(2, *idx).unwrap();
        assert!(
            (mean.re - want).abs() <= 4.0 * se + 1e-9,
            "tuple {k}: mc {} vs formula {want} (se {se})",
            mean.re
        );
        assert!(mean.im.abs() < 5.0 * se + 1e-9);
    }
}

#[test]
fn identity_channel_invariants() {
    let id = KrausChannel::identity();
    let e = e_invariants(id.kraus_ops()).unwrap();
    assert_eq!(e[0], 8.0);
    assert_eq!(e[5], 4.0);
    for m in [1usize, 2, 3, 8] {
        let (a, b, w) = twirl_coefficients(id.kraus_ops(), m).unwrap();
        assert!((a - 1.0).abs() < 1e-12, "m={m}: alpha {a}");
        assert!(b.abs() < 1e-12 && w.abs() < 1e-12);
        assert!((twirl_delta(id.kraus_ops(), m).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn replacement_invariants_match_closed_forms() {
    for (k, e_par) in [(0.3f64, 0.5f64), (0.7, 0.2), (1.0, 0.9)] {
        let ch =
            KrausChannel::replacement(k, &DensityMatrix::polarized(e_par).unwrap()).unwrap();
        let e = e_invariants(ch.kraus_ops()).unwrap();
        let e2 = e_par * e_par;
        let want = [
            8.0 - 12.0 * k + 0.5 * (9.0 + e2) * k * k,
            2.0 * (1.0 + e2 * k * k),
            2.0 + 0.5 * (e2 - 3.0) * k * k,
            4.0 - 3.0 * k + e2 * k * k,
            4.0 - 3.0 * k + e2 * k * k,
            4.0 - 6.0 * k + (3.0 + e2) * k * k,
        ];
        for i in 0..6 {
            assert!(
                (e[i] - want[i]).abs() < 1e-12,
                "gamma={k} eta={e_par}: E{} = {} vs closed form {}",
                i + 1,
                e[i],
                want[i]
            );
        }
    }
}

#[test]
fn damping_invariants_match_closed_forms() {
    for (k, e_par) in [(0.36f64, 0.7f64), (0.1, 1.0), (0.8, 0.0)] {
        let ch = KrausChannel::generalized_damping(k, e_par).unwrap();
        let e = e_invariants(ch.kraus_ops()).unwrap();
        let e2 = e_par * e_par;
        let s = (1.0 - k).sqrt();
        let want = [
            -2.0 * (s + 2.0) * k + 4.0 * (s + 1.0) + 0.5 * k * k * (e2 + 1.0),
            2.0 * (1.0 + k * k * e2),
            2.0 * (s - 1.0) * k + 0.5 * k * k * (e2 + 1.0) + 2.0,
            -k + 2.0 * s + k * k * e2 + 2.0,
            -k + 2.0 * s + k * k * e2 + 2.0,
            -4.0 * k + k * k * (e2 + 1.0) + 4.0,
        ];
        for i in 0..6 {
            assert!(
                (e[i] - want[i]).abs() < 1e-12,
                "gamma={k} eta={e_par}: E{} = {} vs closed form {}",
                i + 1,
                e[i],
                want[i]
            );
        }
    }
}

#[test]
fn coefficients_agree_with_alltoall_code_path() {
    // same formulas implemented twice: entry-level loops here, matrix products
    // in the circuits crate
    for ch in [
        KrausChannel::replacement(0.4, &DensityMatrix::polarized(0.6).unwrap()).unwrap(),
        KrausChannel::generalized_damping(0.25, 0.8).unwrap(),
    ] {
        for n in [1usize, 2, 3, 4, 8] {
            let c = random_circuits::alltoall_coeffs(ch.kraus_ops(), n).unwrap();
            let (a, b, w) = twirl_coefficients(ch.kraus_ops(), n).unwrap();
            let d = twirl_delta(ch.kraus_ops(), n).unwrap();
            assert!((c.alpha_n - a).abs() < 1e-12, "n={n} alpha");
            assert!((c.beta_n - b).abs() < 1e-12, "n={n} beta");
            assert!((c.omega_n - w).abs() < 1e-12, "n={n} omega");
            assert!((c.delta_n - d).abs() < 1e-12, "n={n} delta");
        }
    }
}

#[test]
fn delta_one_consistent_between_routes() {
    // m = 1 goes through the moment tensor; the closed form with d = 2 in
    // twirl_delta must agree (its denominator does not vanish)
    for ch in [
        KrausChannel::generalized_damping(0.36, 1.0).unwrap(),
        KrausChannel::depolarizing(0.5).unwrap(),
    ] {
        let (a1, _, _) = twirl_coefficients(ch.kraus_ops(), 1).unwrap();
        let d1 = twirl_delta(ch.kraus_ops(), 1).unwrap();
        assert!((a1 - d1).abs() < 1e-12, "{a1} vs {d1}");
    }
    // amplitude damping: delta_1 = Tr(M^T M)/3 with Bloch matrix
    // diag(sqrt(1-g), sqrt(1-g), 1-g)
    let g = 0.36f64;
    let ch = KrausChannel::generalized_damping(g, 1.0).unwrap();
    let want = (2.0 * (1.0 - g) + (1.0 - g) * (1.0 - g)) / 3.0;
    assert!((twirl_delta(ch.kraus_ops(), 1).unwrap() - want).abs() < 1e-12);
}

#[test]
fn replacement_asymptotic_envelopes() {
    // log-linear decay with R^2 > 0.99, and the fitted rates stay inside the
    // stated envelopes (1 - 7k/8)^m and (1 - k/2)^m
    let gamma = 0.5;
    let ch = KrausChannel::replacement(gamma, &DensityMatrix::polarized(0.6).unwrap()).unwrap();
    let ms: Vec<usize> = (4..=20).collect();
    for (select, env_rate) in [(0usize, 1.0 - 7.0 * gamma / 8.0), (1, 1.0 - gamma / 2.0)] {
        let ys: Vec<f64> = ms
            .iter()
            .map(|&m| {
                if select == 0 {
                    twirl_coefficients(ch.kraus_ops(), m).unwrap().0
                } else {
                    twirl_delta(ch.kraus_ops(), m).unwrap()
                }
            })
            .collect();
        let (slope, _icept, r2) = log_linear_fit(&ms, &ys);
        assert!(r2 > 0.99, "R^2 = {r2}");
        assert!(
            slope <= env_rate.ln() + 1e-9,
            "decay rate {} slower than envelope {}",
            slope.exp(),
            env_rate
        );
        assert!(ys.iter().all(|y| *y > 0.0));
    }
}

#[test]
fn damping_e1_envelope_constant() {
    // E1 <= 8 (1 - c kappa) with the sharp constant c ~ 0.8452
    let eta = 1.0;
    let mut c_star = f64::INFINITY;
    for i in 1..=999 {
        let k = i as f64 / 1000.0;
        let ch = KrausChannel::generalized_damping(k, eta).unwrap();
        let e = e_invariants(ch.kraus_ops()).unwrap();
        c_star = c_star.min((8.0 - e[0]) / (8.0 * k));
    }
    assert!((c_star - 0.8452).abs() < 5e-3, "sharp constant {c_star}");
    assert!(c_star > 5.0 / 6.0);
}

fn log_linear_fit(ms: &[usize], ys: &[f64]) -> (f64, f64, f64) {
    let xs: Vec<f64> = ms.iter().map(|&m| m as f64).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ly.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ly).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let icept = (sy - slope * sx) / n;
    let mean = sy / n;
    let ss_tot: f64 = ly.iter().map(|y| (y - mean) * (y - mean)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let f = icept + slope * x;
            (y - f) * (y - f)
        })
        .sum();
    (slope, icept, 1.0 - ss_res / ss_tot)
}

#[test]
fn mc_verification_identity_channel() {
    let id = KrausChannel::identity();
    let z = qsim_core::pauli::z();
    let x = kron(&z, &z).unwrap();
    let report = mc_verify_twirl(id.kraus_ops(), 2, &x, 64, &RngStream::new(1, 0)).unwrap();
    // LHS = X^2 exactly with zero variance
    assert!(report.passed, "max dev {} sigma", report.max_sigma_eq09);
    assert!((report.mc_trace_lhs - 4.0).abs() < 1e-10);
}

#[test]
fn mc_verification_replacement() {
    let ch = KrausChannel::replacement(0.3, &DensityMatrix::polarized(0.5).unwrap()).unwrap();
    let z = qsim_core::pauli::z();
    let x = kron(&z, &z).unwrap();
    let report =
        mc_verify_twirl(ch.kraus_ops(), 2, &x, 20_000, &RngStream::new(2, 0)).unwrap();
    assert!(
        report.max_sigma_eq09 <= 4.0,
        "eq09 dev {} sigma",
        report.max_sigma_eq09
    );
    assert!(report.sigma_eq10 <= 4.0, "eq10 dev {} sigma", report.sigma_eq10);
}

#[test]
fn mc_verification_beta_term_dropped_operator() {
    // X = Z (x) I is traceless, so the beta term drops and eq09 must hold
    let ch = KrausChannel::generalized_damping(0.4, 0.9).unwrap();
    let x = kron(&qsim_core::pauli::z(), &CMat::identity(2, 2)).unwrap();
    let report =
        mc_verify_twirl(ch.kraus_ops(), 2, &x, 20_000, &RngStream::new(3, 0)).unwrap();
    assert!(
        report.max_sigma_eq09 <= 4.0,
        "eq09 dev {} sigma",
        report.max_sigma_eq09
    );
}

#[test]
fn mc_verification_rejects_bad_input() {
    let ch = KrausChannel::identity();
    // traced operator rejected
    let x = CMat::identity(4, 4);
    assert!(mc_verify_twirl(ch.kraus_ops(), 2, &x, 100, &RngStream::new(4, 0)).is_err());
    // m too large for dense verification
    let x8 = CMat::zeros(16, 16);
    assert!(mc_verify_twirl(ch.kraus_ops(), 4, &x8, 100, &RngStream::new(5, 0)).is_err());
}
