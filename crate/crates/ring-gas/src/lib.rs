//! Deterministic, reversible, conservative lattice gas on a stack of coupled
//! rings, with quenched scatterers on the links between them.
//!
//! The crate provides:
//! - the exact bit-level dynamics (a bijective one-step map and its inverse),
//! - orbit and loop-decomposition analysis of that map,
//! - two discrete diffusion solvers for the macroscopic ring densities,
//! - exact per-step flux balance counts and molecular-chaos diagnostics,
//! - a deterministic Monte Carlo ensemble harness that compares empirical
//!   densities against the solvers, with variance and Chebyshev envelopes.
//!
//! All randomness is seeded; replica streams are derived with a fixed mixing
//! function, and ensemble aggregation folds in replica order, so results are
//! reproducible for any thread count. The `parallel` feature (on by default)
//! runs replicas on a rayon pool; without it the same code runs serially.

pub mod diffusion;
pub mod ensemble;
pub mod error;
pub mod flux;
pub mod geometry;
pub mod orbit;
pub mod rng;
mod rows;
pub mod scatterer;
pub mod state;

pub use diffusion::{
    diffusion_step, empirical_density, solve_diffusion, DensityProfile, DiffusionParams,
    SolverVariant,
};
pub use ensemble::{
    chebyshev_envelope, lln_convergence_scan, run_ensemble, run_ensemble_serial, run_replica,
    CellStats, EnsembleConfig, EnsembleReport, ScanRow,
};
pub use error::{Error, Result};
pub use flux::{flux_counts, molecular_chaos_residual, verify_flux_identity, FluxCounts, LinkFlux};
pub use geometry::{Geometry, Site};
pub use orbit::{
    generate_anomalous_field, loop_decomposition, orbit_of, period_histogram, AnomalousPattern,
    LoopDecomposition, Orbit,
};
pub use scatterer::ScattererField;
pub use state::OccupationState;
