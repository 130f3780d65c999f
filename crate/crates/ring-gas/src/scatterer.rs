use rand::distr::{Bernoulli, Distribution};

use crate::error::{Error, Result};
use crate::geometry::{Geometry, Site};
use crate::rng::seeded_rng;
use crate::rows::{self, BitRows};

/// Quenched scatterer configuration.
///
/// A set bit at `(k, i)` marks a scatterer on the link between sites `(k, i)`
/// and `(k, i+1)`. Only links `i` in `[-N, N-1]` are stored; any other link
/// reads as empty, which realizes the forced boundary values.
///
/// The one-step map moves every site from row `k` to row `k+1 (mod R)` and
/// swaps it across link `i` exactly when the jump gate
/// `J(k,i) = xi(k,i) * (1 - xi(k,i-1)) * (1 - xi(k,i+1))` is on. The two
/// blocking factors make active links pairwise non-adjacent, so the map is a
/// bijection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScattererField {
    geometry: Geometry,
    /// Link bits, width `2N`.
    xi: BitRows,
    /// Jump gates in site coordinates, width `2N + 1`: bit `q` set means
    /// sites `q` and `q+1` swap when crossing this row.
    swap_lo: BitRows,
    /// `swap_lo << 1`, precomputed for the step kernel.
    swap_hi: BitRows,
}

impl ScattererField {
    pub fn empty(geometry: Geometry) -> Self {
        Self {
            xi: BitRows::new(geometry.ring_len(), geometry.link_count()),
            swap_lo: BitRows::new(geometry.ring_len(), geometry.ring_count()),
            swap_hi: BitRows::new(geometry.ring_len(), geometry.ring_count()),
            geometry,
        }
    }

    /// Field with every stored link occupied. Boundary accessors still read 0.
    pub fn full(geometry: Geometry) -> Self {
        let mut field = Self::empty(geometry);
        field.xi.fill_ones();
        field.recompute_all_gates();
        field
    }

    /// Draws each stored link bit independently with probability `mu`.
    /// Rows are filled in ascending `k`, links in ascending `i`, one draw per
    /// bit, so the result is a pure function of `(geometry, mu, seed)`.
    pub fn sample(geometry: Geometry, mu: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu) {
            return Err(Error::InvalidProbability(mu));
        }
        let mut field = Self::empty(geometry);
        let dist = Bernoulli::new(mu).expect("mu validated");
        let mut rng = seeded_rng(seed);
        for row in 0..geometry.ring_len() {
            for bit in 0..geometry.link_count() {
                if dist.sample(&mut rng) {
                    field.xi.set(row, bit, true);
                }
            }
        }
        field.recompute_all_gates();
        Ok(field)
    }

    /// Builds a field from explicit `(row, link)` scatterer positions.
    pub fn from_links<I>(geometry: Geometry, links: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, i32)>,
    {
        let mut field = Self::empty(geometry);
        for (row, link) in links {
            if row >= geometry.ring_len() {
                return Err(Error::InvalidPattern(format!("row {row} out of range")));
            }
            if !geometry.contains_link(link) {
                return Err(Error::LinkOutOfRange(link));
            }
            field.xi.set(row, geometry.link_bit(link), true);
        }
        field.recompute_all_gates();
        Ok(field)
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    /// The scatterer bit `xi(k, i)`, total in `i`: links outside `[-N, N-1]`
    /// read 0.
    pub fn xi(&self, row: usize, link: i32) -> bool {
        assert!(row < self.geometry.ring_len(), "row out of range");
        if !self.geometry.contains_link(link) {
            return false;
        }
        self.xi.get(row, self.geometry.link_bit(link))
    }

    /// The jump gate `J(k, i) = xi(k,i) (1 - xi(k,i-1)) (1 - xi(k,i+1))`,
    /// total in `i`.
    pub fn j_indicator(&self, row: usize, link: i32) -> bool {
        assert!(row < self.geometry.ring_len(), "row out of range");
        if !self.geometry.contains_link(link) {
            return false;
        }
        self.swap_lo.get(row, self.geometry.link_bit(link))
    }

    /// One step of the site map: `(k, i)` advances to row `k+1 (mod R)` and
    /// crosses to ring `i+1` if `J(k,i)` is on, to `i-1` if `J(k,i-1)` is on,
    /// and stays on ring `i` otherwise.
    pub fn tau(&self, site: Site) -> Site {
        debug_assert!(self.geometry.contains(site));
        let next = self.geometry.next_row(site.row);
        if self.j_indicator(site.row, site.ring) {
            Site::new(next, site.ring + 1)
        } else if self.j_indicator(site.row, site.ring - 1) {
            Site::new(next, site.ring - 1)
        } else {
            Site::new(next, site.ring)
        }
    }

    /// Inverse of [`tau`](Self::tau): mirrors the forward rule with the
    /// gates of row `k - 1`.
    pub fn tau_inverse(&self, site: Site) -> Site {
        debug_assert!(self.geometry.contains(site));
        let prev = self.geometry.prev_row(site.row);
        if self.j_indicator(prev, site.ring - 1) {
            Site::new(prev, site.ring - 1)
        } else if self.j_indicator(prev, site.ring) {
            Site::new(prev, site.ring + 1)
        } else {
            Site::new(prev, site.ring)
        }
    }

    /// Sets or clears one stored link bit and refreshes the affected gates.
    pub fn set_link(&mut self, row: usize, link: i32, value: bool) -> Result<()> {
        if row >= self.geometry.ring_len() {
            return Err(Error::InvalidPattern(format!("row {row} out of range")));
        }
        if !self.geometry.contains_link(link) {
            return Err(Error::LinkOutOfRange(link));
        }
        self.xi.set(row, self.geometry.link_bit(link), value);
        self.recompute_row_gates(row);
        Ok(())
    }

    /// Fraction of stored link bits that are set.
    pub fn link_density(&self) -> f64 {
        let total = self.geometry.ring_len() * self.geometry.link_count();
        if total == 0 {
            return 0.0;
        }
        self.xi.count_ones() as f64 / total as f64
    }

    pub(crate) fn swap_rows(&self, row: usize) -> (&[u64], &[u64]) {
        (self.swap_lo.row(row), self.swap_hi.row(row))
    }

    fn recompute_all_gates(&mut self) {
        for row in 0..self.geometry.ring_len() {
            self.recompute_row_gates(row);
        }
    }

    /// `J = xi & !(xi << 1) & !(xi >> 1)` in link-bit coordinates; the shifts
    /// bring in zeros at both ends, which is exactly the boundary convention.
    fn recompute_row_gates(&mut self, row: usize) {
        let width = self.geometry.link_count();
        let xi_row = self.xi.row(row).to_vec();
        let up = rows::shifted_left_one(&xi_row, width);
        let down = rows::shifted_right_one(&xi_row, width);
        let site_width = self.geometry.ring_count();
        let lo_len = self.swap_lo.row(row).len();
        let mut lo = vec![0u64; lo_len];
        for (w, slot) in lo.iter_mut().enumerate() {
            if w < xi_row.len() {
                *slot = xi_row[w] & !up[w] & !down[w];
            }
        }
        rows::clear_above(&mut lo, site_width);
        let hi = rows::shifted_left_one(&lo, site_width);
        self.swap_lo.row_mut(row).copy_from_slice(&lo);
        self.swap_hi.row_mut(row).copy_from_slice(&hi);
    }
}
