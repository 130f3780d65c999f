use std::fmt::Write as _;
use std::time::Instant;

use anyhow::Result;
use serde_json::json;

use ring_gas::{solve_diffusion, DiffusionParams, SolverVariant};

use crate::cli::DiffusionArgs;
use crate::manifest::finalize;
use crate::output::{fmt_real, OutputSet};
use crate::profile::parse_profile;

pub fn run(args: &DiffusionArgs) -> Result<bool> {
    let started = Instant::now();
    let profile = parse_profile(&args.init, args.half_width)?;
    let variant = match args.variant.as_str() {
        "paper" => SolverVariant::Paper,
        "flux" => SolverVariant::Flux,
        other => unreachable!("clap rejects variant `{other}`"),
    };
    let params = DiffusionParams::new(args.mu, variant, args.half_width)?;
    let trajectory = solve_diffusion(&profile, &params, args.steps)?;

    let mut csv = String::from("t,i,rho_hat,mass\n");
    let mut max_step_drift = 0.0f64;
    for (t, snapshot) in trajectory.iter().enumerate() {
        let mass = snapshot.total_mass();
        if t > 0 {
            max_step_drift = max_step_drift.max((mass - trajectory[t - 1].total_mass()).abs());
        }
        for ring in -(args.half_width as i32)..=(args.half_width as i32) {
            let _ = writeln!(
                csv,
                "{t},{ring},{},{}",
                fmt_real(snapshot.value(ring)),
                fmt_real(mass)
            );
        }
    }

    let summary = json!({
        "half_width": args.half_width,
        "mu": args.mu,
        "variant": args.variant,
        "steps": args.steps,
        "mass_initial": trajectory.first().map(|p| p.total_mass()),
        "mass_final": trajectory.last().map(|p| p.total_mass()),
        "max_step_mass_drift": max_step_drift,
    });

    let mut outputs = OutputSet::new(&args.out);
    outputs.add("trajectory.csv", csv);
    outputs.add(
        "summary.json",
        serde_json::to_string_pretty(&summary)? + "\n",
    );
    finalize("diffusion", None, args, outputs, started)?;
    Ok(true)
}
