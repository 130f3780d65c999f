//! Monte Carlo verification harness: independent replicas of (scatterer
//! field, initial occupation) pairs, empirical densities against the flux
//! solver, variance and deviation-probability envelopes.
//!
//! Replicas are independent work units; with the `parallel` feature they run
//! on a rayon pool. Aggregation always folds the per-replica results in
//! replica-index order, so the report is bit-identical for any thread count.

use serde::Serialize;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::diffusion::{
    diffusion_step, empirical_density, DensityProfile, DiffusionParams, SolverVariant,
};
use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::rng::{mix_seed, StreamPurpose};
use crate::scatterer::ScattererField;
use crate::state::OccupationState;

/// How many sample times [`lln_convergence_scan`] picks inside `[0, R^alpha]`.
const SCAN_TIME_SAMPLES: u64 = 8;

#[derive(Debug, Clone)]
pub struct EnsembleConfig {
    pub geometry: Geometry,
    pub mu: f64,
    pub initial_profile: DensityProfile,
    pub replicas: usize,
    /// Strictly increasing observation times.
    pub times: Vec<u64>,
    pub epsilon: f64,
    pub alpha: f64,
    pub master_seed: u64,
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(Error::InvalidProbability(self.mu));
        }
        if self.initial_profile.len() != self.geometry.ring_count() {
            return Err(Error::ProfileLength {
                expected: self.geometry.ring_count(),
                got: self.initial_profile.len(),
            });
        }
        if self.replicas < 2 {
            return Err(Error::InvalidConfig("need at least 2 replicas".into()));
        }
        if self.times.is_empty() {
            return Err(Error::InvalidConfig("need at least one time".into()));
        }
        if !self.times.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidConfig(
                "times must be strictly increasing".into(),
            ));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::InvalidConfig("epsilon must be positive".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig("alpha must lie in (0, 1)".into()));
        }
        Ok(())
    }

    /// Times outside the guaranteed regime: beyond `R^alpha` or reaching the
    /// minimal recurrence scale `R`. Reported, never rejected.
    pub fn flagged_times(&self) -> Vec<u64> {
        let r = self.geometry.ring_len();
        let horizon = (r as f64).powf(self.alpha);
        self.times
            .iter()
            .copied()
            .filter(|&t| (t as f64) > horizon || t >= r as u64)
            .collect()
    }
}

/// Statistics of one `(ring, time)` cell across replicas.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CellStats {
    pub ring: i32,
    pub time: u64,
    /// Replica mean of the empirical density.
    pub mean: f64,
    /// Unbiased replica variance.
    pub variance: f64,
    /// Fraction of replicas with `|density - solver_flux| > epsilon`.
    pub dev_freq: f64,
    /// Flux-variant solver reference (the ensemble-mean ground truth).
    pub solver_flux: f64,
    /// Uniform-coefficient (`paper` variant) solver value, for comparison.
    pub solver_paper: f64,
    /// Proof envelope `1/R + 4 (t-1)/R` (the `t = 0` row uses `1/R`).
    pub variance_envelope: f64,
    /// `4 * sqrt(variance / replicas)`.
    pub mean_ci_radius: f64,
    /// `4 * sqrt(dev_freq (1 - dev_freq) / replicas) + 4 / replicas`.
    pub freq_ci_radius: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleReport {
    pub ring_len: usize,
    pub half_width: usize,
    pub mu: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub replicas: usize,
    pub master_seed: u64,
    pub times: Vec<u64>,
    /// `6 / (epsilon^2 R^(1-alpha))`, the per-ring deviation bound.
    pub chebyshev_envelope: f64,
    /// Time-major: all rings of `times[0]`, then of `times[1]`, ...
    pub cells: Vec<CellStats>,
    /// Per time: fraction of replicas where some ring deviates by more than
    /// `epsilon` from the flux solver.
    pub union_dev_freq: Vec<f64>,
    /// Times outside the guaranteed regime.
    pub flagged_times: Vec<u64>,
}

impl EnsembleReport {
    pub fn cell(&self, ring: i32, time: u64) -> Option<&CellStats> {
        self.cells
            .iter()
            .find(|c| c.ring == ring && c.time == time)
    }

    pub fn max_dev_freq(&self) -> f64 {
        self.cells.iter().map(|c| c.dev_freq).fold(0.0, f64::max)
    }

    pub fn max_union_freq(&self) -> f64 {
        self.union_dev_freq.iter().copied().fold(0.0, f64::max)
    }

    /// Sample variance within the proof envelope (plus 4-SE slack) at every
    /// cell with `t >= 1`. Flagged times are outside the guaranteed regime
    /// and only warn, so they are not gated here.
    pub fn variance_check(&self) -> bool {
        let slack_factor = 4.0 * (2.0 / (self.replicas as f64 - 1.0)).sqrt();
        self.cells
            .iter()
            .filter(|c| c.time >= 1 && !self.flagged_times.contains(&c.time))
            .all(|c| c.variance <= c.variance_envelope + slack_factor * c.variance)
    }

    /// Per-cell deviation frequency within the Chebyshev envelope (plus CI
    /// slack) wherever the envelope is informative (`<= 1`). Flagged times
    /// are skipped for the same reason as in [`variance_check`].
    pub fn chebyshev_check(&self) -> bool {
        if self.chebyshev_envelope > 1.0 {
            return true;
        }
        self.cells
            .iter()
            .filter(|c| !self.flagged_times.contains(&c.time))
            .all(|c| c.dev_freq <= self.chebyshev_envelope + c.freq_ci_radius)
    }
}

/// `6 / (epsilon^2 R^(1-alpha))`.
pub fn chebyshev_envelope(epsilon: f64, ring_len: usize, alpha: f64) -> Result<f64> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    if ring_len == 0 {
        return Err(Error::InvalidParameter("ring length must be >= 1".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter("alpha must lie in (0, 1)".into()));
    }
    Ok(6.0 / (epsilon * epsilon * (ring_len as f64).powf(1.0 - alpha)))
}

/// Evolves one replica and returns its empirical densities at the requested
/// times. Field and initial state come from independent streams mixed from
/// `(master_seed, replica, purpose)`, so the result is a pure function of
/// `(config, replica)`.
pub fn run_replica(config: &EnsembleConfig, replica: usize) -> Result<Vec<DensityProfile>> {
    if replica >= config.replicas {
        return Err(Error::InvalidConfig(format!(
            "replica index {replica} out of range"
        )));
    }
    let field_seed = mix_seed(config.master_seed, replica as u64, StreamPurpose::Scatterers);
    let state_seed = mix_seed(
        config.master_seed,
        replica as u64,
        StreamPurpose::Occupations,
    );
    let field = ScattererField::sample(config.geometry, config.mu, field_seed)?;
    let mut state = OccupationState::sample(config.geometry, &config.initial_profile, state_seed)?;
    let mut samples = Vec::with_capacity(config.times.len());
    for &target in &config.times {
        state.evolve(&field, target - state.time())?;
        samples.push(empirical_density(&state));
    }
    Ok(samples)
}

fn collect_serial(config: &EnsembleConfig) -> Result<Vec<Vec<DensityProfile>>> {
    (0..config.replicas)
        .map(|r| run_replica(config, r))
        .collect()
}

#[cfg(feature = "parallel")]
fn collect_replicas(config: &EnsembleConfig) -> Result<Vec<Vec<DensityProfile>>> {
    (0..config.replicas)
        .into_par_iter()
        .map(|r| run_replica(config, r))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn collect_replicas(config: &EnsembleConfig) -> Result<Vec<Vec<DensityProfile>>> {
    collect_serial(config)
}

/// Runs all replicas (in parallel when the `parallel` feature is on) and
/// aggregates the report.
pub fn run_ensemble(config: &EnsembleConfig) -> Result<EnsembleReport> {
    config.validate()?;
    let samples = collect_replicas(config)?;
    aggregate(config, &samples)
}

/// Same report as [`run_ensemble`], always on the current thread. Kept as
/// the baseline for the benchmark comparison.
pub fn run_ensemble_serial(config: &EnsembleConfig) -> Result<EnsembleReport> {
    config.validate()?;
    let samples = collect_serial(config)?;
    aggregate(config, &samples)
}

/// Solver profiles at exactly the requested (strictly increasing) times,
/// computed by streaming the recursion instead of storing the trajectory.
fn solver_at_times(
    initial: &DensityProfile,
    params: &DiffusionParams,
    times: &[u64],
) -> Result<Vec<DensityProfile>> {
    let mut current = initial.clone();
    let mut now = 0u64;
    let mut snapshots = Vec::with_capacity(times.len());
    for &target in times {
        while now < target {
            current = diffusion_step(&current, params)?;
            now += 1;
        }
        snapshots.push(current.clone());
    }
    Ok(snapshots)
}

fn aggregate(config: &EnsembleConfig, samples: &[Vec<DensityProfile>]) -> Result<EnsembleReport> {
    let geometry = config.geometry;
    let r = geometry.ring_len() as f64;
    let n_rep = config.replicas as f64;
    let flux = solver_at_times(
        &config.initial_profile,
        &DiffusionParams::new(config.mu, SolverVariant::Flux, geometry.half_width())?,
        &config.times,
    )?;
    let paper = solver_at_times(
        &config.initial_profile,
        &DiffusionParams::new(config.mu, SolverVariant::Paper, geometry.half_width())?,
        &config.times,
    )?;

    let mut cells = Vec::with_capacity(config.times.len() * geometry.ring_count());
    let mut union_dev_freq = Vec::with_capacity(config.times.len());
    for (t_idx, &time) in config.times.iter().enumerate() {
        let flux_profile = &flux[t_idx];
        let paper_profile = &paper[t_idx];
        let mut union_count = 0usize;
        for sample in samples {
            let deviates = geometry
                .rings()
                .any(|ring| (sample[t_idx].value(ring) - flux_profile.value(ring)).abs() > config.epsilon);
            if deviates {
                union_count += 1;
            }
        }
        union_dev_freq.push(union_count as f64 / n_rep);

        for ring in geometry.rings() {
            let mut sum = 0.0;
            for sample in samples {
                sum += sample[t_idx].value(ring);
            }
            let mean = sum / n_rep;
            let mut sq_sum = 0.0;
            let mut dev_count = 0usize;
            for sample in samples {
                let x = sample[t_idx].value(ring);
                sq_sum += (x - mean) * (x - mean);
                if (x - flux_profile.value(ring)).abs() > config.epsilon {
                    dev_count += 1;
                }
            }
            let variance = sq_sum / (n_rep - 1.0);
            let dev_freq = dev_count as f64 / n_rep;
            let variance_envelope = (1.0 + 4.0 * time.saturating_sub(1) as f64) / r;
            cells.push(CellStats {
                ring,
                time,
                mean,
                variance,
                dev_freq,
                solver_flux: flux_profile.value(ring),
                solver_paper: paper_profile.value(ring),
                variance_envelope,
                mean_ci_radius: 4.0 * (variance / n_rep).sqrt(),
                freq_ci_radius: 4.0 * (dev_freq * (1.0 - dev_freq) / n_rep).sqrt() + 4.0 / n_rep,
            });
        }
    }

    Ok(EnsembleReport {
        ring_len: geometry.ring_len(),
        half_width: geometry.half_width(),
        mu: config.mu,
        epsilon: config.epsilon,
        alpha: config.alpha,
        replicas: config.replicas,
        master_seed: config.master_seed,
        times: config.times.clone(),
        chebyshev_envelope: chebyshev_envelope(config.epsilon, geometry.ring_len(), config.alpha)?,
        cells,
        union_dev_freq,
        flagged_times: config.flagged_times(),
    })
}

/// One row of the weak-law scan table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScanRow {
    pub ring_len: usize,
    /// Largest per-(ring, time) deviation frequency observed.
    pub max_dev_freq: f64,
    /// Largest any-ring deviation frequency observed.
    pub max_union_freq: f64,
    /// `6 / (epsilon^2 R^(1-alpha))` at this `R`.
    pub envelope: f64,
}

/// Deterministic times used by the scan at ring length `R`: eight points
/// spread over `[0, floor(R^alpha)]`.
pub fn scan_times(ring_len: usize, alpha: f64) -> Vec<u64> {
    let horizon = (ring_len as f64).powf(alpha).floor() as u64;
    let mut times: Vec<u64> = (0..SCAN_TIME_SAMPLES)
        .map(|j| (horizon * j) / (SCAN_TIME_SAMPLES - 1))
        .collect();
    times.dedup();
    times
}

/// Reruns the ensemble at each ring length (times resampled inside
/// `[0, R^alpha]`) and tabulates the observed deviation frequencies against
/// the Chebyshev envelope.
pub fn lln_convergence_scan(
    base_config: &EnsembleConfig,
    ring_lens: &[usize],
) -> Result<Vec<ScanRow>> {
    if !ring_lens.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidConfig(
            "ring lengths must be strictly increasing".into(),
        ));
    }
    let mut rows = Vec::with_capacity(ring_lens.len());
    for &ring_len in ring_lens {
        let config = EnsembleConfig {
            geometry: Geometry::new(ring_len, base_config.geometry.half_width())?,
            times: scan_times(ring_len, base_config.alpha),
            ..base_config.clone()
        };
        let report = run_ensemble(&config)?;
        rows.push(ScanRow {
            ring_len,
            max_dev_freq: report.max_dev_freq(),
            max_union_freq: report.max_union_freq(),
            envelope: report.chebyshev_envelope,
        });
    }
    Ok(rows)
}
