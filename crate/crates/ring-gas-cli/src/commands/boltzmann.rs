use std::fmt::Write as _;
use std::time::Instant;

use anyhow::Result;
use serde_json::json;

use ring_gas::rng::{mix_seed, StreamPurpose};
use ring_gas::{
    flux_counts, molecular_chaos_residual, verify_flux_identity, Geometry, OccupationState,
    ScattererField,
};

use crate::cli::BoltzmannArgs;
use crate::manifest::finalize;
use crate::output::{fmt_real, OutputSet};
use crate::profile::parse_profile;

pub fn run(args: &BoltzmannArgs) -> Result<bool> {
    let started = Instant::now();
    let geometry = Geometry::new(args.ring_len, args.half_width)?;
    let profile = parse_profile(&args.init, args.half_width)?;
    let field = ScattererField::sample(
        geometry,
        args.mu,
        mix_seed(args.seed, 0, StreamPurpose::Scatterers),
    )?;
    let mut state = OccupationState::sample(
        geometry,
        &profile,
        mix_seed(args.seed, 0, StreamPurpose::Occupations),
    )?;

    let mut csv = String::from("t,i,Xr,Xl,Xhr,Xhl,res_a,res_b\n");
    let mut max_abs_residual: i64 = 0;
    for t in 0..args.steps {
        let counts = flux_counts(&state, &field)?;
        for link in geometry.links() {
            let flux = counts.link(link);
            let (res_a, res_b) = molecular_chaos_residual(&state, &field, args.mu, link, true)?;
            let _ = writeln!(
                csv,
                "{t},{link},{},{},{},{},{},{}",
                flux.x_right,
                flux.x_left,
                flux.xhat_right,
                flux.xhat_left,
                fmt_real(res_a),
                fmt_real(res_b)
            );
        }
        let before = state.clone();
        state.step(&field)?;
        let residuals = verify_flux_identity(&before, &state, &field)?;
        max_abs_residual = max_abs_residual.max(residuals.iter().map(|r| r.abs()).max().unwrap_or(0));
    }
    let identity_ok = max_abs_residual == 0;

    let summary = json!({
        "ring_len": args.ring_len,
        "half_width": args.half_width,
        "mu": args.mu,
        "steps": args.steps,
        "identity_verdict": if identity_ok { "pass" } else { "fail" },
        "max_abs_residual": max_abs_residual,
    });

    let mut outputs = OutputSet::new(&args.out);
    outputs.add("flux.csv", csv);
    outputs.add(
        "summary.json",
        serde_json::to_string_pretty(&summary)? + "\n",
    );
    finalize("boltzmann", Some(args.seed), args, outputs, started)?;
    Ok(identity_ok)
}
