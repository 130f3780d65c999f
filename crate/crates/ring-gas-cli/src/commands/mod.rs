mod boltzmann;
mod diffusion;
mod ensemble;
mod orbits;
mod simulate;

use anyhow::{bail, Result};

use crate::cli::{Command, ReplayArgs};
use crate::manifest::RunManifest;

/// Runs one command; `Ok(false)` means an acceptance check failed (exit 2).
pub fn dispatch(command: Command) -> Result<bool> {
    match command {
        Command::Simulate(args) => simulate::run(&args),
        Command::Orbits(args) => orbits::run(&args),
        Command::Diffusion(args) => diffusion::run(&args),
        Command::Ensemble(args) => ensemble::run(&args),
        Command::Boltzmann(args) => boltzmann::run(&args),
        Command::Replay(args) => replay(&args),
    }
}

fn replay(args: &ReplayArgs) -> Result<bool> {
    let manifest = RunManifest::load(&args.manifest)?;
    macro_rules! rerun {
        ($ty:ty, $runner:path) => {{
            let mut parsed: $ty = serde_json::from_value(manifest.parameters.clone())?;
            if let Some(out) = &args.out {
                parsed.out = out.clone();
            }
            $runner(&parsed)
        }};
    }
    match manifest.command.as_str() {
        "simulate" => rerun!(crate::cli::SimulateArgs, simulate::run),
        "orbits" => rerun!(crate::cli::OrbitsArgs, orbits::run),
        "diffusion" => rerun!(crate::cli::DiffusionArgs, diffusion::run),
        "ensemble" => rerun!(crate::cli::EnsembleArgs, ensemble::run),
        "boltzmann" => rerun!(crate::cli::BoltzmannArgs, boltzmann::run),
        other => bail!("manifest names unknown command `{other}`"),
    }
}
