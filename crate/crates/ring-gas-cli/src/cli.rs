use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

/// Batch experiments on the ring lattice gas. Every command writes its data
/// files plus a `manifest.json` that records the full parameter set; rerunning
/// with the same parameters (or `ringgas replay`) reproduces the data files
/// byte for byte. Reals are printed with 17 significant digits.
///
/// Exit codes: 0 success, 1 usage or runtime error, 2 an acceptance check
/// failed.
#[derive(Debug, Parser)]
#[command(name = "ringgas", version, about, long_about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve one sampled (field, state) pair and record ring densities.
    ///
    /// Writes densities.csv with header `t,i,rho` (one row per time and
    /// ring), summary.json, manifest.json.
    Simulate(SimulateArgs),
    /// Decompose the site map into loops and report period statistics.
    ///
    /// Writes histogram.csv (`period,count`), ring_span.csv (`span,count`),
    /// summary.json with the period-bounds verdict, manifest.json.
    Orbits(OrbitsArgs),
    /// Iterate a discrete diffusion solver on a density profile.
    ///
    /// Writes trajectory.csv with header `t,i,rho_hat,mass`, summary.json,
    /// manifest.json.
    Diffusion(DiffusionArgs),
    /// Monte Carlo ensemble versus the flux solver, with variance and
    /// Chebyshev envelopes.
    ///
    /// Writes ensemble.csv with header `i,t,mean,var,freq,rho_hat,env_cheb,
    /// env_var`, summary.json, manifest.json. With a comma-separated list in
    /// --R, runs a convergence scan instead: per-R ensemble_R<value>.csv
    /// files plus scan.csv (`R,max_freq,max_union_freq,envelope`); --times is
    /// not accepted then (times are sampled inside [0, R^alpha]). Exit code 2
    /// if the variance or Chebyshev check fails.
    Ensemble(EnsembleArgs),
    /// Per-step flux counts, the exact balance verdict, and molecular-chaos
    /// residuals.
    ///
    /// Writes flux.csv with header `t,i,Xr,Xl,Xhr,Xhl,res_a,res_b` (one row
    /// per step and link), summary.json, manifest.json. Exit code 2 if the
    /// exact balance fails.
    Boltzmann(BoltzmannArgs),
    /// Re-execute a command from a previously written manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    /// Sites per ring.
    #[arg(long = "R")]
    pub ring_len: usize,
    /// Half-width: rings are indexed -N ..= N.
    #[arg(long = "N")]
    pub half_width: usize,
    /// Scatterer density.
    #[arg(long)]
    pub mu: f64,
    /// Master seed; field and initial state use independent derived streams.
    #[arg(long)]
    pub seed: u64,
    /// Number of forward steps.
    #[arg(long)]
    pub steps: u64,
    /// Initial profile: const:p | step:a,b | linear:a,b | file:PATH.
    #[arg(long)]
    pub init: String,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct OrbitsArgs {
    /// Sites per ring.
    #[arg(long = "R")]
    pub ring_len: usize,
    /// Half-width: rings are indexed -N ..= N.
    #[arg(long = "N")]
    pub half_width: usize,
    /// Scatterer density for a random field.
    #[arg(long, conflicts_with = "pattern")]
    pub mu: Option<f64>,
    /// Seed for the random field.
    #[arg(long, conflicts_with = "pattern")]
    pub seed: Option<u64>,
    /// Structured field instead of a random one:
    /// isolated:k0,i0 | single-column:k0 | diagonal:stride[,offset].
    #[arg(long)]
    pub pattern: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct DiffusionArgs {
    /// Half-width: rings are indexed -N ..= N.
    #[arg(long = "N")]
    pub half_width: usize,
    /// Scatterer density entering the coefficients.
    #[arg(long)]
    pub mu: f64,
    /// Number of solver steps.
    #[arg(long)]
    pub steps: usize,
    /// Initial profile: const:p | step:a,b | linear:a,b | file:PATH.
    #[arg(long)]
    pub init: String,
    /// Solver variant.
    #[arg(long, value_parser = ["paper", "flux"])]
    pub variant: String,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct EnsembleArgs {
    /// Sites per ring; a comma-separated list runs a convergence scan.
    #[arg(long = "R", value_delimiter = ',', required = true)]
    pub ring_len: Vec<usize>,
    /// Half-width: rings are indexed -N ..= N.
    #[arg(long = "N")]
    pub half_width: usize,
    /// Scatterer density.
    #[arg(long)]
    pub mu: f64,
    /// Initial profile: const:p | step:a,b | linear:a,b | file:PATH.
    #[arg(long)]
    pub init: String,
    /// Number of independent replicas.
    #[arg(long)]
    pub replicas: usize,
    /// Observation times (comma separated, strictly increasing). Required
    /// for a single-R run; rejected in scan mode.
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<u64>>,
    /// Deviation threshold of the weak-law event.
    #[arg(long)]
    pub epsilon: f64,
    /// Time-window exponent: the guaranteed regime is t in [0, R^alpha].
    #[arg(long)]
    pub alpha: f64,
    /// Master seed for all replica streams.
    #[arg(long)]
    pub seed: u64,
    /// Size of the worker pool; output bytes do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize, Deserialize)]
pub struct BoltzmannArgs {
    /// Sites per ring.
    #[arg(long = "R")]
    pub ring_len: usize,
    /// Half-width: rings are indexed -N ..= N.
    #[arg(long = "N")]
    pub half_width: usize,
    /// Scatterer density.
    #[arg(long)]
    pub mu: f64,
    /// Master seed; field and initial state use independent derived streams.
    #[arg(long)]
    pub seed: u64,
    /// Number of forward steps.
    #[arg(long)]
    pub steps: u64,
    /// Initial profile: const:p | step:a,b | linear:a,b | file:PATH.
    #[arg(long, default_value = "const:0.5")]
    pub init: String,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    /// Path to a manifest.json written by a previous run.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Optional replacement output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
