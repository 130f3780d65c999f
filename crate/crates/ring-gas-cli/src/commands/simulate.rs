use std::fmt::Write as _;
use std::time::Instant;

use anyhow::Result;
use serde_json::json;

use ring_gas::rng::{mix_seed, StreamPurpose};
use ring_gas::{empirical_density, Geometry, OccupationState, ScattererField};

use crate::cli::SimulateArgs;
use crate::manifest::finalize;
use crate::output::{fmt_real, OutputSet};
use crate::profile::parse_profile;

pub fn run(args: &SimulateArgs) -> Result<bool> {
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
    let popcount_initial = state.popcount();

    let mut csv = String::from("t,i,rho\n");
    for t in 0..=args.steps {
        if t > 0 {
            state.step(&field)?;
        }
        let density = empirical_density(&state);
        for ring in geometry.rings() {
            let _ = writeln!(csv, "{t},{ring},{}", fmt_real(density.value(ring)));
        }
    }

    let summary = json!({
        "ring_len": args.ring_len,
        "half_width": args.half_width,
        "mu": args.mu,
        "steps": args.steps,
        "site_count": geometry.site_count(),
        "popcount_initial": popcount_initial,
        "popcount_final": state.popcount(),
        "conserved": popcount_initial == state.popcount(),
    });

    let mut outputs = OutputSet::new(&args.out);
    outputs.add("densities.csv", csv);
    outputs.add(
        "summary.json",
        serde_json::to_string_pretty(&summary)? + "\n",
    );
    finalize("simulate", Some(args.seed), args, outputs, started)?;
    Ok(true)
}
