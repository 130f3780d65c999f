use anyhow::{anyhow, bail, Context, Result};
use ring_gas::DensityProfile;

/// Parses an initial-profile spec into `2N + 1` ring densities.
///
/// - `const:p` — every ring at `p`
/// - `step:a,b` — rings `-N ..= 0` at `a` (center belongs to the left
///   block), rings `1 ..= N` at `b`
/// - `linear:a,b` — affine from `a` at ring `-N` to `b` at ring `N`
/// - `file:PATH` — CSV with exactly `2N + 1` values (commas and/or newlines)
pub fn parse_profile(spec: &str, half_width: usize) -> Result<DensityProfile> {
    let len = 2 * half_width + 1;
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("profile spec `{spec}` must look like kind:args"))?;
    let values: Vec<f64> = match kind {
        "const" => {
            let p: f64 = rest
                .parse()
                .with_context(|| format!("bad constant in `{spec}`"))?;
            vec![p; len]
        }
        "step" => {
            let (a, b) = parse_pair(rest, spec)?;
            (0..len)
                .map(|idx| if idx <= half_width { a } else { b })
                .collect()
        }
        "linear" => {
            let (a, b) = parse_pair(rest, spec)?;
            if half_width == 0 {
                // Both endpoints land on the single ring; take the midpoint.
                vec![0.5 * (a + b)]
            } else {
                (0..len)
                    .map(|idx| a + (b - a) * idx as f64 / (len - 1) as f64)
                    .collect()
            }
        }
        "file" => {
            let text = std::fs::read_to_string(rest)
                .with_context(|| format!("reading profile file `{rest}`"))?;
            let values: Vec<f64> = text
                .split([',', '\n', '\r'])
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<f64>()
                        .with_context(|| format!("bad value `{s}` in profile file"))
                })
                .collect::<Result<_>>()?;
            if values.len() != len {
                bail!(
                    "profile file holds {} values, geometry needs {len}",
                    values.len()
                );
            }
            values
        }
        other => bail!("unknown profile kind `{other}`"),
    };
    DensityProfile::new(values).map_err(|e| anyhow!("invalid profile `{spec}`: {e}"))
}

fn parse_pair(rest: &str, spec: &str) -> Result<(f64, f64)> {
    let (a, b) = rest
        .split_once(',')
        .ok_or_else(|| anyhow!("`{spec}` needs two comma-separated values"))?;
    Ok((
        a.trim()
            .parse()
            .with_context(|| format!("bad value in `{spec}`"))?,
        b.trim()
            .parse()
            .with_context(|| format!("bad value in `{spec}`"))?,
    ))
}
