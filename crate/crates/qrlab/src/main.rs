use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qrlab::config::ExperimentConfig;
use qrlab::exit_codes;
use qrlab::experiments::{
    run_contraction, run_fig2, run_plan, run_verify, run_weingarten, RunContext,
};

/// Batch experiments for the quantum-refrigerator laboratory.
#[derive(Parser)]
#[command(name = "qrlab", version, about)]
struct Cli {
    /// JSON experiment configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the Monte Carlo trial count of the chosen experiment.
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact compression-cycle counts against the analytic bounds.
    Fig2,
    /// Monte Carlo contraction curves against the depth bounds.
    Contraction,
    /// RESET planning sweep and feasibility-boundary fit.
    Plan,
    /// Twirl-identity verification report for one channel.
    Weingarten,
    /// The full verification battery; exit 0 iff every check passes.
    Verify,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, String> {
    let mut cfg = match &cli.config {
        None => ExperimentConfig::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("bad config: {e}"))?
        }
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.out = out.display().to_string();
    }
    if let Some(trials) = cli.trials {
        cfg.trials = trials;
    }
    // fail fast on config-level mistakes, before any experiment runs
    cfg.contraction
        .channel
        .build()
        .map_err(|e| format!("contraction channel: {e}"))?;
    cfg.weingarten
        .channel
        .build()
        .map_err(|e| format!("weingarten channel: {e}"))?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("config error: {msg}");
            return ExitCode::from(exit_codes::CONFIG_ERROR as u8);
        }
    };
    let ctx = match RunContext::new(cfg) {
        Ok(ctx) => ctx,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(exit_codes::CONFIG_ERROR as u8);
        }
    };

    let outcome = match cli.command {
        Command::Fig2 => run_fig2(&ctx).map(|s| {
            for f in &s.files {
                println!("wrote {}", f.display());
            }
            println!(
                "fig2: bound violations = {}, tightness violations = {}",
                s.bound_violations, s.tightness_violations
            );
            s.bound_violations == 0 && s.tightness_violations == 0
        }),
        Command::Contraction => run_contraction(&ctx).map(|s| {
            for f in &s.files {
                println!("wrote {}", f.display());
            }
            println!(
                "contraction: lower violations = {}, upper violations = {}, prediction violations = {}",
                s.lower_violations, s.upper_violations, s.prediction_violations
            );
            s.lower_violations == 0 && s.upper_violations == 0 && s.prediction_violations == 0
        }),
        Command::Plan => run_plan(&ctx).map(|s| {
            for f in &s.files {
                println!("wrote {}", f.display());
            }
            println!(
                "plan: max boundary-exponent relative error = {:.4}, monotone = {}",
                s.max_exponent_rel_err, s.monotone_ok
            );
            s.max_exponent_rel_err <= 0.10 && s.monotone_ok
        }),
        Command::Weingarten => run_weingarten(&ctx).map(|s| {
            for f in &s.files {
                println!("wrote {}", f.display());
            }
            println!(
                "weingarten: max deviation {:.2} sigma, passed = {}",
                s.max_sigma_dev, s.passed
            );
            s.passed
        }),
        Command::Verify => run_verify(&ctx).map(|s| {
            for (name, ok, detail) in &s.checks {
                println!("{} {name}: {detail}", if *ok { "ok  " } else { "FAIL" });
            }
            s.all_passed()
        }),
    };

    match outcome {
        Ok(true) => ExitCode::from(exit_codes::OK as u8),
        Ok(false) => ExitCode::from(exit_codes::VERIFICATION_FAILED as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_codes::CONFIG_ERROR as u8)
        }
    }
}
