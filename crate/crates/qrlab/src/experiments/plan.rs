use anyhow::Result;
use refrigerator::{plan_reset, PlanConstants};

use super::RunContext;
use crate::csvout::{fmt_f64, CsvTable};
use crate::svg::{Style, SvgPlot};

pub struct PlanSummary {
    pub max_exponent_rel_err: f64,
    pub monotone_ok: bool,
    pub files: Vec<std::path::PathBuf>,
}

pub fn run_plan(ctx: &RunContext) -> Result<PlanSummary> {
    let cfg = &ctx.cfg.plan;
    let constants = cfg.constants();
    let mut files = Vec::new();

    // feasibility sweep over (kappa, eta) per lattice dimension
    let mut table = CsvTable::new(&[
        "kappa",
        "eta",
        "d",
        "mu",
        "T_settle",
        "N_a",
        "T_RES",
        "kappa_prime",
        "feasible",
        "reason",
    ]);
    for &d in &cfg.dims {
        for ie in 0..cfg.eta_points {
            let eta = 10f64.powf(
                cfg.eta_min.log10() * ie as f64 / (cfg.eta_points.max(2) - 1) as f64,
            );
            for ik in 0..cfg.kappa_points {
                let lk = cfg.log10_kappa_min
                    + (cfg.log10_kappa_max - cfg.log10_kappa_min) * ik as f64
                        / (cfg.kappa_points - 1) as f64;
                let kappa = 10f64.powf(lk);
                match plan_reset(kappa, eta, d, cfg.mu, &constants) {
                    Ok(plan) => table.push_row(vec![
                        fmt_f64(kappa),
                        fmt_f64(eta),
                        d.to_string(),
                        fmt_f64(cfg.mu),
                        fmt_f64(plan.t_settle),
                        fmt_f64(plan.n_ancilla),
                        fmt_f64(plan.t_reset),
                        fmt_f64(plan.kappa_prime),
                        plan.feasible.to_string(),
                        plan.infeasible_reasons.join("; ").replace(',', ";"),
                    ]),
                    Err(err) => table.push_row(vec![
                        fmt_f64(kappa),
                        fmt_f64(eta),
                        d.to_string(),
                        fmt_f64(cfg.mu),
                        "nan".into(),
                        "nan".into(),
                        "nan".into(),
                        "nan".into(),
                        "false".into(),
                        err.to_string().replace(',', ";"),
                    ]),
                }
            }
        }
    }
    let path = ctx.out_dir.join("plan_sweep.csv");
    table.write(&path, &ctx.hash, ctx.seed())?;
    files.push(path);

    // feasibility boundary: kappa*(eta) and its fitted exponent per dimension
    let mut fit_table = CsvTable::new(&["d", "mu", "fitted_exponent", "target", "rel_err"]);
    let mut plot = SvgPlot::new("Feasibility boundary", "eta", "kappa*").log_x().log_y();
    let mut max_rel_err = 0.0f64;
    let colors = ["#c0392b", "#2980b9", "#27ae60", "#8e44ad"];
    for (di, &d) in cfg.dims.iter().enumerate() {
        let mut pts = Vec::new();
        for ie in 0..cfg.eta_points {
            let eta = 10f64.powf(
                cfg.eta_min.log10() * ie as f64 / (cfg.eta_points.max(2) - 1) as f64,
            );
            // boundary() returns ln kappa*
            if let Some(ln_kappa_star) = boundary(eta, d, cfg.mu, &constants) {
                pts.push((eta.ln(), ln_kappa_star));
            }
        }
        if pts.len() >= 3 {
            let slope = ls_slope(&pts);
            let target = cfg.mu / d as f64;
            let rel = (slope / target - 1.0).abs();
            max_rel_err = max_rel_err.max(rel);
            fit_table.push_row(vec![
                d.to_string(),
                fmt_f64(cfg.mu),
                fmt_f64(slope),
                fmt_f64(target),
                fmt_f64(rel),
            ]);
            let curve: Vec<(f64, f64)> =
                pts.iter().map(|&(le, lk)| (le.exp(), lk.exp())).collect();
            plot.add(
                &format!("d = {d}"),
                colors[di % colors.len()],
                Style::Line,
                &curve,
            );
        }
    }
    let path = ctx.out_dir.join("plan_boundary_fit.csv");
    fit_table.write(&path, &ctx.hash, ctx.seed())?;
    files.push(path);
    let path = ctx.out_dir.join("plan_boundary.svg");
    plot.write(&path)?;
    files.push(path);

    // monotonicity of kappa' in kappa and in 1/eta
    let mut monotone_ok = true;
    let mut prev = 0.0;
    for i in 0..32 {
        let kappa = 10f64.powf(-12.0 + 0.3 * i as f64);
        let p = plan_reset(kappa, 0.7, 2, cfg.mu, &constants)?;
        if p.kappa_prime < prev {
            monotone_ok = false;
        }
        prev = p.kappa_prime;
    }
    let mut prev = f64::INFINITY;
    for i in 0..24 {
        let eta = 10f64.powf(-3.0 + i as f64 / 8.0);
        let p = plan_reset(1e-10, eta.min(1.0), 2, cfg.mu, &constants)?;
        if p.kappa_prime > prev {
            monotone_ok = false;
        }
        prev = p.kappa_prime;
    }

    Ok(PlanSummary {
        max_exponent_rel_err: max_rel_err,
        monotone_ok,
        files,
    })
}

/// Log of the feasibility boundary kappa*(eta), found by bisection.
fn boundary(eta: f64, d: u32, mu: f64, constants: &PlanConstants) -> Option<f64> {
    let feasible = |lk: f64| {
        plan_reset(10f64.powf(lk), eta, d, mu, constants)
            .map(|p| p.feasible)
            .unwrap_or(false)
    };
    let (mut lo, mut hi) = (-280.0f64, -0.5f64);
    if !feasible(lo) {
        return None;
    }
    if feasible(hi) {
        return Some(hi * std::f64::consts::LN_10);
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi) * std::f64::consts::LN_10)
}

fn ls_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    // the boundary decreases with eta decreasing; slope of ln k* vs ln eta
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
