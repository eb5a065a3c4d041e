use channels::{chi, diagonalized_form, KrausChannel};
use qsim_core::DensityMatrix;
use refrigerator::simulate_settling;

#[test]
fn zero_steps_stay_mixed() {
    let ch = KrausChannel::generalized_damping(0.2, 0.5).unwrap();
    let traj = simulate_settling(&ch, 0).unwrap();
    assert_eq!(traj, vec![0.0]);
}

#[test]
fn replacement_settling_is_geometric() {
    // z_k = eta (1 - (1-gamma)^k) exactly
    let (gamma, eta) = (0.15, 0.7);
    let ch = KrausChannel::replacement(gamma, &DensityMatrix::polarized(eta).unwrap()).unwrap();
    let traj = simulate_settling(&ch, 25).unwrap();
    for (k, z) in traj.iter().enumerate() {
        let want = eta * (1.0 - (1.0 - gamma).powi(k as i32));
        assert!((z - want).abs() < 1e-12, "step {k}: {z} vs {want}");
    }
}

#[test]
fn damping_settling_satisfies_polarization_recurrence() {
    let ch = KrausChannel::generalized_damping(0.1, 0.5).unwrap();
    let diag = diagonalized_form(&ch).unwrap();
    let x = chi(&diag);
    let eta = 0.5;
    let traj = simulate_settling(&ch, 20).unwrap();
    for k in 0..traj.len() - 1 {
        let want = eta + x * (traj[k] - eta);
        assert!(
            (traj[k + 1] - want).abs() < 1e-9,
            "step {k}: {} vs {want}",
            traj[k + 1]
        );
    }
    let t = traj.len() - 1;
    assert!(traj[t] >= eta * (1.0 - x.powi(t as i32)) - 1e-9);
}

#[test]
fn settling_off_diagonal_frame_channel() {
    // a channel whose fixed point is not Z-diagonal still settles towards eta
    let h = qsim_core::CMat::from_row_slice(
        2,
        2,
        &[
            qsim_core::c64(1., 0.),
            qsim_core::c64(1., 0.),
            qsim_core::c64(1., 0.),
            qsim_core::c64(-1., 0.),
        ],
    ) * qsim_core::c64(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let ch = KrausChannel::generalized_damping(0.3, 0.6)
        .unwrap()
        .conjugated(&h)
        .unwrap();
    let traj = simulate_settling(&ch, 80).unwrap();
    assert!((traj.last().unwrap() - 0.6).abs() < 1e-9);
}

#[test]
fn unital_channel_rejected() {
    let ch = KrausChannel::dephasing(0.4).unwrap();
    assert!(simulate_settling(&ch, 5).is_err());
}
