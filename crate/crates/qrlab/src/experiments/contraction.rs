use anyhow::{bail, Result};
use qsim_core::{QubitSubset, RngStream};
use random_circuits::{
    alltoall_bound, alltoall_coeffs, closure_under_gates, evolve_subset, initial_distances,
    lower_bound_curve, mc_alltoall_profile, mc_subset_profile, two_qubit_params,
    upper_bound_curve, ArchKind, Architecture,
};

use super::RunContext;
use crate::csvout::{fmt_f64, CsvTable};
use crate::svg::{Style, SvgPlot};

pub struct ContractionSummary {
    pub lower_violations: usize,
    pub upper_violations: usize,
    pub prediction_violations: usize,
    pub files: Vec<std::path::PathBuf>,
}

pub fn run_contraction(ctx: &RunContext) -> Result<ContractionSummary> {
    let cfg = &ctx.cfg.contraction;
    let trials = if ctx.cfg.trials > 0 {
        ctx.cfg.trials
    } else {
        cfg.trials
    };
    let n = cfg.architecture.n;
    let depth = cfg.architecture.depth;
    let channel = cfg.channel.build()?;

    // desk-scale budget: warn before kicking off anything heavy
    let dim = 1usize << n;
    let est_ops = trials * depth * n * dim * dim;
    if est_ops > 1_000_000 {
        eprintln!("contraction: estimated {est_ops} matrix ops, this may take a while");
    }

    match cfg.architecture.kind {
        ArchKind::Brickwork1d => run_brickwork(ctx, n, depth, trials, &channel),
        ArchKind::Alltoall => run_alltoall(ctx, n, depth, trials, &channel),
    }
}

fn run_brickwork(
    ctx: &RunContext,
    n: usize,
    depth: usize,
    trials: usize,
    channel: &channels::KrausChannel,
) -> Result<ContractionSummary> {
    if n > 8 {
        bail!("brickwork contraction limited to 8 qubits, got {n}");
    }
    let noise2 = if channel.num_qubits() == 1 {
        channel.tensor_power(2)?
    } else {
        channel.clone()
    };
    let params = two_qubit_params(noise2.kraus_ops())?;
    let arch = Architecture::Brickwork1d;

    // all qubit pairs, tracked both in the exact calculus and in the MC
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push(QubitSubset::from_qubits(&[i, j]));
        }
    }
    // exact transfer-rule prediction over the closed family
    let mut rng = RngStream::new(ctx.seed(), 0).rng();
    let mut gate_supports = Vec::new();
    for layer in 0..depth {
        for (i, j) in arch.layer_gates(n, layer, &mut rng)? {
            gate_supports.push(QubitSubset::from_qubits(&[i, j]));
        }
    }
    let family = closure_under_gates(n, &pairs, &gate_supports)?;
    let mut state = initial_distances(n, 0, 1, &family)?;

    let mut rng = RngStream::new(ctx.seed(), 0).rng();
    let mut predicted: Vec<Vec<f64>> = Vec::with_capacity(depth);
    for layer in 0..depth {
        for (i, j) in arch.layer_gates(n, layer, &mut rng)? {
            state = evolve_subset(
                &state,
                QubitSubset::from_qubits(&[i, j]),
                noise2.kraus_ops(),
            )?;
        }
        predicted.push(pairs.iter().map(|g| state.get(*g).unwrap()).collect());
    }

    let mc = mc_subset_profile(
        n,
        &arch,
        &noise2,
        &pairs,
        0,
        1,
        depth,
        trials,
        &RngStream::new(ctx.seed(), 1),
    )?;

    let mut table = CsvTable::new(&[
        "depth",
        "predicted",
        "mc_mean",
        "mc_stderr",
        "bound_lower",
        "bound_upper",
    ]);
    let (mut lower_violations, mut upper_violations, mut prediction_violations) = (0, 0, 0);
    let mut mc_pts = Vec::new();
    let mut lo_pts = Vec::new();
    let mut hi_pts = Vec::new();
    let mut pred_pts = Vec::new();
    for d in 0..depth {
        // the pair with the largest MC mean carries the lower-bound claim
        let best = mc[d]
            .iter()
            .copied()
            .max_by(|a, b| a.mean.total_cmp(&b.mean))
            .expect("at least one pair");
        let lower = lower_bound_curve(&params, d as u32 + 1);
        let upper = upper_bound_curve(&params, n, d as u32 + 1);
        if best.mean < lower - 3.0 * best.stderr {
            lower_violations += 1;
        }
        if best.mean > upper + 3.0 * best.stderr {
            upper_violations += 1;
        }
        // every pair's MC mean against its exact Haar-average prediction
        for (pi, est) in mc[d].iter().enumerate() {
            if (est.mean - predicted[d][pi]).abs() > 4.5 * est.stderr + 1e-9 {
                prediction_violations += 1;
            }
        }
        let pred_best = predicted[d].iter().cloned().fold(0.0f64, f64::max);
        table.push_row(vec![
            (d + 1).to_string(),
            fmt_f64(pred_best),
            fmt_f64(best.mean),
            fmt_f64(best.stderr),
            fmt_f64(lower),
            fmt_f64(upper),
        ]);
        mc_pts.push(((d + 1) as f64, best.mean));
        lo_pts.push(((d + 1) as f64, lower));
        hi_pts.push(((d + 1) as f64, upper));
        pred_pts.push(((d + 1) as f64, pred_best));
    }
    let mut files = Vec::new();
    let path = ctx.out_dir.join("contraction_brickwork.csv");
    table.write(&path, &ctx.hash, ctx.seed())?;
    files.push(path);

    let mut plot = SvgPlot::new(
        "Max-pair marginal HS distance, brickwork",
        "depth",
        "S",
    )
    .log_y();
    plot.add("mc max-pair", "#c0392b", Style::Points, &mc_pts);
    plot.add("predicted", "#8e44ad", Style::Line, &pred_pts);
    plot.add("lower bound", "#2c3e50", Style::DashedLine, &lo_pts);
    plot.add("upper bound", "#16a085", Style::DashedLine, &hi_pts);
    let path = ctx.out_dir.join("contraction_brickwork.svg");
    plot.write(&path)?;
    files.push(path);

    Ok(ContractionSummary {
        lower_violations,
        upper_violations,
        prediction_violations,
        files,
    })
}

fn run_alltoall(
    ctx: &RunContext,
    n: usize,
    depth: usize,
    trials: usize,
    channel: &channels::KrausChannel,
) -> Result<ContractionSummary> {
    if channel.num_qubits() != 1 {
        bail!("all-to-all runs take a single-qubit channel");
    }
    let coeffs = alltoall_coeffs(channel.kraus_ops(), n)?;
    let prof = mc_alltoall_profile(n, depth, channel, trials, &RngStream::new(ctx.seed(), 2))?;

    let mut table = CsvTable::new(&[
        "depth",
        "predicted",
        "mc_mean",
        "mc_stderr",
        "bound_lower",
        "bound_upper",
        "mc_trace_mean",
        "mc_trace_stderr",
    ]);
    let (mut lower_violations, mut upper_violations, mut prediction_violations) = (0, 0, 0);
    let mut mc_pts = Vec::new();
    let mut hi_pts = Vec::new();
    let mut pred_pts = Vec::new();
    for d in 0..depth {
        // predicted and measured S_F = (1/2) E Tr X_d^2
        let pred = coeffs.delta_n.powi(d as i32 + 1);
        let s_est = prof.second_moment[d];
        let (s_mean, s_err) = (0.5 * s_est.mean, 0.5 * s_est.stderr);
        let t_est = prof.trace_distance[d];
        let bound = alltoall_bound(&coeffs, n, d as u32 + 1);
        if (s_mean - pred).abs() > 3.0 * s_err + 1e-12 {
            prediction_violations += 1;
        }
        if t_est.mean > bound + 3.0 * t_est.stderr {
            upper_violations += 1;
        }
        if t_est.mean < s_mean - 3.0 * (t_est.stderr + s_err) {
            lower_violations += 1; // trace distance dominates the HS distance
        }
        table.push_row(vec![
            (d + 1).to_string(),
            fmt_f64(pred),
            fmt_f64(s_mean),
            fmt_f64(s_err),
            fmt_f64(pred),
            fmt_f64(bound),
            fmt_f64(t_est.mean),
            fmt_f64(t_est.stderr),
        ]);
        mc_pts.push(((d + 1) as f64, t_est.mean.max(1e-300)));
        hi_pts.push(((d + 1) as f64, bound.max(1e-300)));
        pred_pts.push(((d + 1) as f64, s_mean.max(1e-300)));
    }
    let mut files = Vec::new();
    let path = ctx.out_dir.join("contraction_alltoall.csv");
    table.write(&path, &ctx.hash, ctx.seed())?;
    files.push(path);

    let mut plot = SvgPlot::new("All-to-all contraction", "depth", "distance").log_y();
    plot.add("mc trace distance", "#c0392b", Style::Points, &mc_pts);
    plot.add("mc HS (S_F)", "#8e44ad", Style::Line, &pred_pts);
    plot.add("upper bound", "#16a085", Style::DashedLine, &hi_pts);
    let path = ctx.out_dir.join("contraction_alltoall.svg");
    plot.write(&path)?;
    files.push(path);

    Ok(ContractionSummary {
        lower_violations,
        upper_violations,
        prediction_violations,
        files,
    })
}
