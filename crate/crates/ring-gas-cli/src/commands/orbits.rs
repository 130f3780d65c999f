use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::json;

use ring_gas::rng::{mix_seed, StreamPurpose};
use ring_gas::{
    generate_anomalous_field, loop_decomposition, period_histogram, AnomalousPattern, Geometry,
    Orbit, ScattererField,
};

use crate::cli::OrbitsArgs;
use crate::manifest::finalize;
use crate::output::OutputSet;

pub fn run(args: &OrbitsArgs) -> Result<bool> {
    let started = Instant::now();
    let geometry = Geometry::new(args.ring_len, args.half_width)?;
    let field = match (&args.pattern, args.mu) {
        (Some(spec), None) => generate_anomalous_field(geometry, parse_pattern(spec)?)?,
        (None, Some(mu)) => {
            let seed = args.seed.unwrap_or(0);
            ScattererField::sample(geometry, mu, mix_seed(seed, 0, StreamPurpose::Scatterers))?
        }
        (None, None) => bail!("provide either --mu [--seed] or --pattern"),
        (Some(_), Some(_)) => unreachable!("rejected by clap"),
    };

    let decomposition = loop_decomposition(&field);
    let histogram = period_histogram(&decomposition);

    let mut histogram_csv = String::from("period,count\n");
    for (period, count) in &histogram {
        let _ = writeln!(histogram_csv, "{period},{count}");
    }

    let mut spans: BTreeMap<usize, usize> = BTreeMap::new();
    for orbit in decomposition.orbits() {
        *spans.entry(orbit.ring_span()).or_insert(0) += 1;
    }
    let mut span_csv = String::from("span,count\n");
    for (span, count) in &spans {
        let _ = writeln!(span_csv, "{span},{count}");
    }

    let lower = geometry.ring_len();
    let upper = geometry.ring_len() * geometry.ring_count();
    let bounds_ok = decomposition
        .orbits()
        .iter()
        .all(|o| o.period() >= lower && o.period() <= upper && o.period() % lower == 0);
    let covered: usize = decomposition.orbits().iter().map(Orbit::period).sum();
    let partition_ok = covered == geometry.site_count();
    let pass = bounds_ok && partition_ok;

    let summary = json!({
        "ring_len": args.ring_len,
        "half_width": args.half_width,
        "orbit_count": decomposition.orbits().len(),
        "min_period": decomposition.min_period(),
        "max_period": decomposition.max_period(),
        "period_lower_bound": lower,
        "period_upper_bound": upper,
        "max_ring_span": spans.keys().max().copied().unwrap_or(0),
        "bounds_verdict": if bounds_ok { "pass" } else { "fail" },
        "partition_verdict": if partition_ok { "pass" } else { "fail" },
    });

    let mut outputs = OutputSet::new(&args.out);
    outputs.add("histogram.csv", histogram_csv);
    outputs.add("ring_span.csv", span_csv);
    outputs.add(
        "summary.json",
        serde_json::to_string_pretty(&summary)? + "\n",
    );
    finalize("orbits", args.seed, args, outputs, started)?;
    Ok(pass)
}

fn parse_pattern(spec: &str) -> Result<AnomalousPattern> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("pattern `{spec}` must look like kind:args"))?;
    match kind {
        "isolated" => {
            let (row, link) = rest
                .split_once(',')
                .ok_or_else(|| anyhow!("isolated pattern needs k0,i0"))?;
            Ok(AnomalousPattern::Isolated {
                row: row.trim().parse().context("bad row in pattern")?,
                link: link.trim().parse().context("bad link in pattern")?,
            })
        }
        "single-column" => Ok(AnomalousPattern::SingleColumn {
            row: rest.trim().parse().context("bad row in pattern")?,
        }),
        "diagonal" => {
            let (stride, offset) = match rest.split_once(',') {
                Some((s, o)) => (
                    s.trim().parse().context("bad stride in pattern")?,
                    o.trim().parse().context("bad offset in pattern")?,
                ),
                None => (rest.trim().parse().context("bad stride in pattern")?, 0),
            };
            Ok(AnomalousPattern::Diagonal { stride, offset })
        }
        other => bail!("unknown pattern kind `{other}`"),
    }
}
