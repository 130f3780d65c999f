use rand::distr::{Bernoulli, Distribution};

use crate::diffusion::DensityProfile;
use crate::error::{Error, Result};
use crate::geometry::{Geometry, Site};
use crate::rng::seeded_rng;
use crate::rows::{self, BitRows};
use crate::scatterer::ScattererField;

/// Occupation bits over all sites, plus the current time index.
///
/// Storage is row-major (one packed `2N+1`-bit row per `k`), so a forward
/// step is "swap each row across its active gates, then rotate all rows by
/// one". The dynamics is a permutation of the bits: the total popcount never
/// changes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccupationState {
    geometry: Geometry,
    bits: BitRows,
    time: u64,
}

impl OccupationState {
    pub fn empty(geometry: Geometry) -> Self {
        Self {
            bits: BitRows::new(geometry.ring_len(), geometry.ring_count()),
            geometry,
            time: 0,
        }
    }

    pub fn full(geometry: Geometry) -> Self {
        let mut state = Self::empty(geometry);
        state.bits.fill_ones();
        state
    }

    /// Draws site `(k, i)` occupied independently with probability
    /// `profile[i]`, at time 0. Rows are filled in ascending `k`, rings in
    /// ascending `i`, one draw per site, so the result is a pure function of
    /// `(geometry, profile, seed)`.
    pub fn sample(geometry: Geometry, profile: &DensityProfile, seed: u64) -> Result<Self> {
        if profile.len() != geometry.ring_count() {
            return Err(Error::ProfileLength {
                expected: geometry.ring_count(),
                got: profile.len(),
            });
        }
        let dists: Vec<Bernoulli> = profile
            .values()
            .iter()
            .map(|&p| Bernoulli::new(p).expect("profile validated on construction"))
            .collect();
        let mut state = Self::empty(geometry);
        let mut rng = seeded_rng(seed);
        for row in 0..geometry.ring_len() {
            for (bit, dist) in dists.iter().enumerate() {
                if dist.sample(&mut rng) {
                    state.bits.set(row, bit, true);
                }
            }
        }
        Ok(state)
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn get(&self, site: Site) -> bool {
        assert!(self.geometry.contains(site), "site out of range");
        self.bits.get(site.row, self.geometry.ring_bit(site.ring))
    }

    pub fn set(&mut self, site: Site, value: bool) {
        assert!(self.geometry.contains(site), "site out of range");
        self.bits
            .set(site.row, self.geometry.ring_bit(site.ring), value);
    }

    /// Total number of occupied sites.
    pub fn popcount(&self) -> u64 {
        self.bits.count_ones()
    }

    /// Occupied-site count per ring, indexed `0 ..= 2N` (ring `-N` first).
    pub fn ring_counts(&self) -> Vec<u64> {
        self.bits.per_bit_counts()
    }

    /// Occupation of every ring at row `k`, indexed `0 ..= 2N`.
    pub fn row_occupations(&self, row: usize) -> Vec<bool> {
        (0..self.geometry.ring_count())
            .map(|bit| self.bits.get(row, bit))
            .collect()
    }

    /// Advances one step: the bit of site `x` moves to `tau(x)`.
    pub fn step(&mut self, field: &ScattererField) -> Result<()> {
        self.check_field(field)?;
        for row in 0..self.geometry.ring_len() {
            let (lo, hi) = field.swap_rows(row);
            rows::apply_swap(self.bits.row_mut(row), lo, hi);
        }
        self.bits.rotate_rows_forward();
        self.time += 1;
        Ok(())
    }

    /// Undoes one step: the bit of site `y` moves to `tau_inverse(y)`.
    pub fn step_backward(&mut self, field: &ScattererField) -> Result<()> {
        self.check_field(field)?;
        if self.time == 0 {
            return Err(Error::TimeUnderflow);
        }
        self.bits.rotate_rows_backward();
        for row in 0..self.geometry.ring_len() {
            let (lo, hi) = field.swap_rows(row);
            rows::apply_swap(self.bits.row_mut(row), lo, hi);
        }
        self.time -= 1;
        Ok(())
    }

    pub fn evolve(&mut self, field: &ScattererField, steps: u64) -> Result<()> {
        self.check_field(field)?;
        for _ in 0..steps {
            self.step(field)?;
        }
        Ok(())
    }

    pub fn evolve_backward(&mut self, field: &ScattererField, steps: u64) -> Result<()> {
        self.check_field(field)?;
        if steps > self.time {
            return Err(Error::TimeUnderflow);
        }
        for _ in 0..steps {
            self.step_backward(field)?;
        }
        Ok(())
    }

    pub(crate) fn row_words(&self, row: usize) -> &[u64] {
        self.bits.row(row)
    }

    fn check_field(&self, field: &ScattererField) -> Result<()> {
        if field.geometry() != &self.geometry {
            return Err(Error::GeometryMismatch);
        }
        Ok(())
    }
}
