use anyhow::Result;
use refrigerator::{
    cycle_bound_small_p, cycle_bound_small_z, exact_cycle_count, exact_cycle_count_p,
};

use super::RunContext;
use crate::csvout::{fmt_f64, CsvTable};
use crate::svg::{Style, SvgPlot};

/// Cycle-count tables and figures: exact counts against the analytic bounds,
/// for the polarization route (panel a) and the error-weight route (panel b).
pub struct Fig2Summary {
    pub bound_violations: usize,
    pub tightness_violations: usize,
    pub files: Vec<std::path::PathBuf>,
}

pub fn run_fig2(ctx: &RunContext) -> Result<Fig2Summary> {
    let cfg = &ctx.cfg.fig2;
    let mut bound_violations = 0usize;
    let mut tightness_violations = 0usize;
    let mut files = Vec::new();

    // panel a: polarization targets above z_in
    let mut table = CsvTable::new(&["z_out", "exact_cycles", "bound", "bound_ceil"]);
    let mut exact_pts = Vec::new();
    let mut bound_pts = Vec::new();
    let z_hi = 0.995f64;
    for i in 0..cfg.z_out_points {
        let f = (i + 1) as f64 / cfg.z_out_points as f64;
        let z_out = cfg.z_in + f * (z_hi - cfg.z_in);
        let exact = exact_cycle_count(cfg.z_in, z_out)?;
        let bound = cycle_bound_small_z(cfg.z_in, z_out)?;
        let ceil = bound.ceil();
        if (ceil as u32) < exact {
            bound_violations += 1;
        }
        if z_out <= 0.5 && ceil as i64 - exact as i64 > 1 {
            tightness_violations += 1;
        }
        table.push_row(vec![
            fmt_f64(z_out),
            exact.to_string(),
            fmt_f64(bound),
            fmt_f64(ceil),
        ]);
        exact_pts.push((z_out, exact as f64));
        bound_pts.push((z_out, bound));
    }
    let path = ctx.out_dir.join("fig2a.csv");
    table.write(&path, &ctx.hash, ctx.seed())?;
    files.push(path);

    let mut plot = SvgPlot::new(
        "Compression cycles vs target polarization",
        "z_out",
        "cycles",
    );
    plot.add("exact", "#c0392b", Style::Points, &exact_pts);
    plot.add("bound", "#2c3e50", Style::DashedLine, &bound_pts);
    let path = ctx.out_dir.join("fig2a.svg");
    plot.write(&path)?;
    files.push(path);

    // panel b: error-weight targets below p_in, log-spaced
    let mut table = CsvTable::new(&["p_out", "exact_cycles", "bound", "bound_ceil"]);
    let mut exact_pts = Vec::new();
    let mut bound_pts = Vec::new();
    for i in 0..cfg.p_out_points {
        let f = (i + 1) as f64 / cfg.p_out_points as f64;
        let p_out = cfg.p_in * (cfg.p_out_min / cfg.p_in).powf(f);
        let exact = exact_cycle_count_p(cfg.p_in, p_out)?;
        let bound = cycle_bound_small_p(cfg.p_in, p_out)?;
        let ceil = bound.ceil();
        if (ceil as u32) < exact {
            bound_violations += 1;
        }
        table.push_row(vec![
            fmt_f64(p_out),
            exact.to_string(),
            fmt_f64(bound),
            fmt_f64(ceil),
        ]);
        exact_pts.push((p_out, exact as f64));
        bound_pts.push((p_out, bound));
    }
    let path = ctx.out_dir.join("fig2b.csv");
    table.write(&path, &ctx.hash, ctx.seed())?;
    files.push(path);

    let mut plot = SvgPlot::new(
        "Compression cycles vs target error weight",
        "p_out",
        "cycles",
    )
    .log_x();
    plot.add("exact", "#c0392b", Style::Points, &exact_pts);
    plot.add("bound", "#2c3e50", Style::DashedLine, &bound_pts);
    let path = ctx.out_dir.join("fig2b.svg");
    plot.write(&path)?;
    files.push(path);

    Ok(Fig2Summary {
        bound_violations,
        tightness_violations,
        files,
    })
}
