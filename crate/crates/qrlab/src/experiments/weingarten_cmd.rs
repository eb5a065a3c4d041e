use anyhow::{bail, Result};
use num_complex::Complex64;
use qsim_core::{ginibre, kron, CMat, RngStream};
use serde_json::json;
use weingarten::mc_verify_twirl;

use super::RunContext;

pub struct WeingartenSummary {
    pub passed: bool,
    pub max_sigma_dev: f64,
    pub files: Vec<std::path::PathBuf>,
}

/// Runs the twirl verification for the configured channel at the configured
/// copy count and emits the report JSON.
pub fn run_weingarten(ctx: &RunContext) -> Result<WeingartenSummary> {
    let cfg = &ctx.cfg.weingarten;
    let channel = cfg.channel.build()?;
    if channel.num_qubits() != 1 {
        bail!("the twirl verification takes a single-qubit channel");
    }
    let trials = if ctx.cfg.trials > 0 {
        ctx.cfg.trials
    } else {
        cfg.trials
    };
    let dim = 1usize << cfg.m;

    // two traceless Hermitian test operators: Z^(x)m and a seeded random one
    let mut zz = qsim_core::pauli::z();
    for _ in 1..cfg.m {
        zz = kron(&zz, &qsim_core::pauli::z())?;
    }
    let mut rng = RngStream::new(ctx.seed(), 100).rng();
    let g = ginibre(dim, dim, &mut rng);
    let mut h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let shift = h.trace() / Complex64::new(dim as f64, 0.0);
    for i in 0..dim {
        h[(i, i)] -= shift;
    }
    let ops: [(&str, &CMat); 2] = [("pauli_z_product", &zz), ("random_traceless", &h)];

    let mut max_sigma: f64 = 0.0;
    let mut passed = true;
    let mut per_op = Vec::new();
    let mut report_core = None;
    for (i, (name, x)) in ops.iter().enumerate() {
        let report = mc_verify_twirl(
            channel.kraus_ops(),
            cfg.m,
            x,
            trials,
            &RngStream::new(ctx.seed(), 200 + i as u64),
        )?;
        max_sigma = max_sigma.max(report.max_sigma_eq09).max(report.sigma_eq10);
        passed &= report.passed;
        per_op.push(json!({
            "operator": name,
            "max_sigma_eq09": report.max_sigma_eq09,
            "sigma_eq10": report.sigma_eq10,
            "passed": report.passed,
        }));
        report_core.get_or_insert(report);
    }
    let core = report_core.expect("two operators ran");

    let report_json = json!({
        "channel": ctx.cfg.weingarten.channel,
        "m": cfg.m,
        "coefficients": {
            "alpha_m": core.alpha_m,
            "beta_m": core.beta_m,
            "omega_m": core.omega_m,
            "delta_m": core.delta_m,
        },
        "e_values": core.e_values,
        "mc": {
            "trials": trials,
            "max_sigma_dev": max_sigma,
            "passed": passed,
            "operators": per_op,
        },
    });
    std::fs::create_dir_all(&ctx.out_dir)?;
    let path = ctx.out_dir.join("weingarten_report.json");
    std::fs::write(&path, serde_json::to_string_pretty(&report_json)? + "\n")?;
    Ok(WeingartenSummary {
        passed,
        max_sigma_dev: max_sigma,
        files: vec![path],
    })
}
