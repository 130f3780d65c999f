use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::OccupationState;

/// Per-ring densities, indexed `-N ..= N` (stored ring `-N` first).
/// Values are always in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    values: Vec<f64>,
}

impl DensityProfile {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len().is_multiple_of(2) {
            return Err(Error::ProfileLength {
                expected: values.len() + 1,
                got: values.len(),
            });
        }
        for &v in &values {
            if !(0.0..=1.0).contains(&v) || v.is_nan() {
                return Err(Error::InvalidDensity(v));
            }
        }
        Ok(Self { values })
    }

    pub fn uniform(half_width: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; 2 * half_width + 1])
    }

    /// Bypasses range validation; caller guarantees values in `[0, 1]` up to
    /// round-off (the solvers preserve the range by the maximum principle).
    pub(crate) fn from_values_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values
            .iter()
            .all(|&v| (-1e-9..=1.0 + 1e-9).contains(&v)));
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn half_width(&self) -> usize {
        (self.values.len() - 1) / 2
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Density of ring `i`.
    pub fn value(&self, ring: i32) -> f64 {
        let idx = ring + self.half_width() as i32;
        assert!(idx >= 0 && (idx as usize) < self.values.len(), "ring out of range");
        self.values[idx as usize]
    }

    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Profile reflected through the center ring (`i -> -i`).
    pub fn reflected(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        Self { values }
    }
}

/// Which discrete diffusion system to iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverVariant {
    /// Uniform-coefficient system: `mu (1-mu)^2` on the discrete Laplacian
    /// for all interior rings, `mu (1-mu)` at the two boundary rings against
    /// their single neighbor.
    Paper,
    /// Link-coefficient form: each link carries `mu (1-mu)^2`, except the two
    /// boundary-adjacent links which carry `mu (1-mu)` — the exact expected
    /// jump gate there, since one blocking factor is forced to 1. Conserves
    /// total mass exactly and reproduces the ensemble mean at every ring.
    Flux,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusionParams {
    mu: f64,
    variant: SolverVariant,
    half_width: usize,
}

impl DiffusionParams {
    pub fn new(mu: f64, variant: SolverVariant, half_width: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::InvalidProbability(mu));
        }
        Ok(Self {
            mu,
            variant,
            half_width,
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn variant(&self) -> SolverVariant {
        self.variant
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// Coefficient of link `q` (0-based from the `-N` side) in the flux form:
    /// `mu (1-mu)` on the two outermost stored links, `mu (1-mu)^2` elsewhere.
    fn link_coefficient(&self, q: usize) -> f64 {
        let links = 2 * self.half_width;
        debug_assert!(q < links);
        let c = self.mu * (1.0 - self.mu);
        if q == 0 || q == links - 1 {
            c
        } else {
            c * (1.0 - self.mu)
        }
    }
}

/// Empirical per-ring density: occupied fraction of each ring.
pub fn empirical_density(state: &OccupationState) -> DensityProfile {
    let r = state.geometry().ring_len() as f64;
    let values = state
        .ring_counts()
        .into_iter()
        .map(|c| c as f64 / r)
        .collect();
    DensityProfile::from_values_unchecked(values)
}

/// One explicit update of the chosen discrete diffusion system.
pub fn diffusion_step(profile: &DensityProfile, params: &DiffusionParams) -> Result<DensityProfile> {
    let n = params.half_width();
    let len = 2 * n + 1;
    if profile.len() != len {
        return Err(Error::ProfileLength {
            expected: len,
            got: profile.len(),
        });
    }
    let old = profile.values();
    let mut new = old.to_vec();
    if len == 1 {
        return Ok(DensityProfile::from_values_unchecked(new));
    }
    match params.variant() {
        SolverVariant::Paper => {
            let mu = params.mu();
            let interior = mu * (1.0 - mu) * (1.0 - mu);
            let boundary = mu * (1.0 - mu);
            new[0] = old[0] + boundary * (old[1] - old[0]);
            new[len - 1] = old[len - 1] + boundary * (old[len - 2] - old[len - 1]);
            for idx in 1..len - 1 {
                new[idx] = old[idx] + interior * (old[idx - 1] + old[idx + 1] - 2.0 * old[idx]);
            }
        }
        SolverVariant::Flux => {
            for q in 0..len - 1 {
                let c = params.link_coefficient(q);
                let transfer = c * (old[q] - old[q + 1]);
                new[q] -= transfer;
                new[q + 1] += transfer;
            }
        }
    }
    Ok(DensityProfile::from_values_unchecked(new))
}

/// Iterates [`diffusion_step`]; the result holds `steps + 1` profiles
/// starting with `initial`.
pub fn solve_diffusion(
    initial: &DensityProfile,
    params: &DiffusionParams,
    steps: usize,
) -> Result<Vec<DensityProfile>> {
    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push(initial.clone());
    for _ in 0..steps {
        let next = diffusion_step(trajectory.last().expect("non-empty"), params)?;
        trajectory.push(next);
    }
    Ok(trajectory)
}
