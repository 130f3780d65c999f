//! Deterministic random number streams.
//!
//! All randomness in this crate flows through [`ChaCha8Rng`] seeded from a
//! 64-bit value. Independent streams (one per replica and purpose) are derived
//! by chaining the master seed, the replica index, and a purpose tag through
//! the SplitMix64 finalizer. The construction is fixed so that a given
//! `(master_seed, replica, purpose)` triple always yields the same stream,
//! regardless of thread count or call order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a derived stream is consumed for. Each purpose gets its own stream so
/// that, e.g., scatterer draws never perturb occupation draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamPurpose {
    /// Quenched scatterer field bits.
    Scatterers = 1,
    /// Initial occupation bits.
    Occupations = 2,
}

/// One round of the SplitMix64 output function.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `(master_seed, replica, purpose)` into a single 64-bit seed by
/// feeding each word through SplitMix64 in a fixed order.
pub fn mix_seed(master_seed: u64, replica: u64, purpose: StreamPurpose) -> u64 {
    let mut z = splitmix64(master_seed);
    z = splitmix64(z ^ replica);
    splitmix64(z ^ purpose as u64)
}

/// The crate's deterministic generator, seeded from a mixed 64-bit seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
