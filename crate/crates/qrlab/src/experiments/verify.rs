use anyhow::Result;
use channels::{chi, diagonalized_form, ChannelSpec, KrausChannel};
use num_complex::Complex64;
use qsim_core::{ginibre, kron, QubitSubset, RngStream};
use random_circuits::{
    closure_under_gates, evolve_subset, initial_distances, mc_subset_profile, Architecture,
};
use refrigerator::simulate_settling;
use weingarten::mc_verify_twirl;

use super::RunContext;

pub struct VerifySummary {
    pub checks: Vec<(String, bool, String)>,
}

impl VerifySummary {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|(_, ok, _)| *ok)
    }
}

/// The aggregated verification battery: twirl identities, the transfer rule,
/// and the settling recurrence, each at 3-sigma (or exact) tolerances.
pub fn run_verify(ctx: &RunContext) -> Result<VerifySummary> {
    let cfg = &ctx.cfg.verify;
    let mut checks = Vec::new();

    // twirl identities on both canonical channels
    for (label, spec) in [
        ("twirl replacement(0.3, 0.5)", ChannelSpec::replacement(0.3, 0.5)),
        ("twirl damping(0.2, 0.8)", ChannelSpec::damping(0.2, 0.8)),
    ] {
        let channel = spec.build()?;
        let zz = kron(&qsim_core::pauli::z(), &qsim_core::pauli::z())?;
        let report = mc_verify_twirl(
            channel.kraus_ops(),
            2,
            &zz,
            cfg.twirl_trials,
            &RngStream::new(ctx.seed(), 300),
        )?;
        checks.push((
            label.to_string(),
            report.passed,
            format!(
                "max dev {:.2} sigma (eq09), {:.2} sigma (eq10) at {} trials",
                report.max_sigma_eq09, report.sigma_eq10, report.trials
            ),
        ));
    }

    // identity channel: zero-variance trivial pass
    {
        let id = KrausChannel::identity();
        let zz = kron(&qsim_core::pauli::z(), &qsim_core::pauli::z())?;
        let report = mc_verify_twirl(id.kraus_ops(), 2, &zz, 64, &RngStream::new(ctx.seed(), 301))?;
        // zero-variance run: judge by the absolute trace residual instead of
        // sigma units
        let residual = (report.mc_trace_lhs - report.trace_rhs).abs();
        checks.push((
            "twirl identity channel".into(),
            report.passed && residual < 1e-10,
            format!("trace residual {residual:.2e}"),
        ));
    }

    // transfer rule: one noisy gate on a 4-qubit register, all alignment cases
    for (label, ch1) in [
        ("transfer rule, depolarizing(0.2)", KrausChannel::depolarizing(0.2)?),
        (
            "transfer rule, damping(0.2, 1.0)",
            KrausChannel::generalized_damping(0.2, 1.0)?,
        ),
    ] {
        let noise2 = ch1.tensor_power(2)?;
        let omega = QubitSubset::from_qubits(&[1, 2]);
        let subsets = [
            QubitSubset::from_qubits(&[1, 2]),
            QubitSubset::from_qubits(&[0, 1]),
            QubitSubset::from_qubits(&[0, 3]),
        ];
        let family = closure_under_gates(4, &subsets, &[omega])?;
        let state = initial_distances(4, 0, 0b1111, &family)?;
        let predicted = evolve_subset(&state, omega, noise2.kraus_ops())?;
        let mc = mc_subset_profile(
            4,
            &Architecture::Custom(vec![vec![(1, 2)]]),
            &noise2,
            &subsets,
            0,
            0b1111,
            1,
            cfg.transfer_trials,
            &RngStream::new(ctx.seed(), 310),
        )?;
        let mut ok = true;
        let mut detail = String::new();
        for (i, g) in subsets.iter().enumerate() {
            let want = predicted.get(*g).unwrap();
            let est = mc[0][i];
            let dev = (est.mean - want).abs();
            let tol = 3.0 * est.stderr + 1e-10;
            ok &= dev <= tol;
            detail.push_str(&format!("{g}: dev {dev:.2e} (tol {tol:.2e}); "));
        }
        checks.push((label.to_string(), ok, detail));
    }

    // settling recurrence across the damping grid
    for gamma in [0.05, 0.2] {
        for eta in [0.3, 0.8] {
            let ch = KrausChannel::generalized_damping(gamma, eta)?;
            let x = chi(&diagonalized_form(&ch)?);
            let traj = simulate_settling(&ch, cfg.settling_steps)?;
            let mut worst: f64 = 0.0;
            for k in 0..traj.len() - 1 {
                worst = worst.max((traj[k + 1] - (eta + x * (traj[k] - eta))).abs());
            }
            let t = traj.len() - 1;
            let floor = eta * (1.0 - x.powi(t as i32)) - 1e-9;
            let ok = worst <= 1e-9 && traj[t] >= floor;
            checks.push((
                format!("settling damping({gamma}, {eta})"),
                ok,
                format!("worst step residual {worst:.2e}, z_T = {:.6}", traj[t]),
            ));
        }
    }

    // corrupted channel spec must fail before any run
    {
        let broken: ChannelSpec = serde_json::from_str(
            r#"{"kind":"custom","kraus":[[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]]}"#,
        )?;
        let ok = broken.build().is_err();
        checks.push((
            "config validation rejects incomplete Kraus".into(),
            ok,
            "non-CPTP custom spec".into(),
        ));
    }

    // a seeded random traceless operator keeps the twirl battery honest
    {
        let channel = ChannelSpec::damping(0.4, 0.6).build()?;
        let mut rng = RngStream::new(ctx.seed(), 320).rng();
        let g = ginibre(4, 4, &mut rng);
        let mut h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
        let shift = h.trace() / Complex64::new(4.0, 0.0);
        for i in 0..4 {
            h[(i, i)] -= shift;
        }
        let report = mc_verify_twirl(
            channel.kraus_ops(),
            2,
            &h,
            cfg.twirl_trials,
            &RngStream::new(ctx.seed(), 321),
        )?;
        checks.push((
            "twirl damping(0.4, 0.6), random operator".into(),
            report.passed,
            format!(
                "max dev {:.2} sigma (eq09), {:.2} sigma (eq10)",
                report.max_sigma_eq09, report.sigma_eq10
            ),
        ));
    }

    Ok(VerifySummary { checks })
}
