use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of the phase space: `2N + 1` rings, each carrying `R` sites.
///
/// Rings are indexed by a signed coordinate `i` in `[-N, N]`; positions along
/// a ring by a row coordinate `k` in `[0, R)` with arithmetic modulo `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geometry {
    ring_len: usize,
    half_width: usize,
}

/// Upper bound on the half-width so ring indices always fit in `i32`.
const MAX_HALF_WIDTH: usize = 1 << 24;

impl Geometry {
    pub fn new(ring_len: usize, half_width: usize) -> Result<Self> {
        if ring_len == 0 {
            return Err(Error::InvalidGeometry("ring length must be >= 1".into()));
        }
        if half_width > MAX_HALF_WIDTH {
            return Err(Error::InvalidGeometry(format!(
                "half-width {half_width} exceeds supported maximum {MAX_HALF_WIDTH}"
            )));
        }
        Ok(Self {
            ring_len,
            half_width,
        })
    }

    /// Sites per ring (`R`).
    pub fn ring_len(&self) -> usize {
        self.ring_len
    }

    /// Half-width (`N`); rings are indexed `-N ..= N`.
    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// Number of rings, `2N + 1`.
    pub fn ring_count(&self) -> usize {
        2 * self.half_width + 1
    }

    /// Number of stored link columns per row, `2N`.
    pub fn link_count(&self) -> usize {
        2 * self.half_width
    }

    /// Total number of sites, `R * (2N + 1)`.
    pub fn site_count(&self) -> usize {
        self.ring_len * self.ring_count()
    }

    pub fn min_ring(&self) -> i32 {
        -(self.half_width as i32)
    }

    pub fn max_ring(&self) -> i32 {
        self.half_width as i32
    }

    /// Ring indices `-N ..= N` in ascending order.
    pub fn rings(&self) -> impl Iterator<Item = i32> {
        self.min_ring()..=self.max_ring()
    }

    /// Stored link indices `-N ..= N-1` in ascending order. A link `i` sits
    /// between rings `i` and `i + 1`; links outside this range are forced to 0.
    pub fn links(&self) -> impl Iterator<Item = i32> {
        self.min_ring()..self.max_ring()
    }

    pub fn contains(&self, site: Site) -> bool {
        site.row < self.ring_len && site.ring >= self.min_ring() && site.ring <= self.max_ring()
    }

    pub fn contains_link(&self, link: i32) -> bool {
        link >= self.min_ring() && link < self.max_ring()
    }

    /// Bit position of ring `i` inside a packed row (`i + N`).
    pub(crate) fn ring_bit(&self, ring: i32) -> usize {
        debug_assert!(ring >= self.min_ring() && ring <= self.max_ring());
        (ring + self.half_width as i32) as usize
    }

    /// Bit position of link `i` inside a packed link row (`i + N`).
    pub(crate) fn link_bit(&self, link: i32) -> usize {
        debug_assert!(self.contains_link(link));
        (link + self.half_width as i32) as usize
    }

    /// `k + 1 (mod R)`.
    pub(crate) fn next_row(&self, row: usize) -> usize {
        let next = row + 1;
        if next == self.ring_len {
            0
        } else {
            next
        }
    }

    /// `k - 1 (mod R)`.
    pub(crate) fn prev_row(&self, row: usize) -> usize {
        if row == 0 {
            self.ring_len - 1
        } else {
            row - 1
        }
    }
}

/// One site `(k, i)`: row `k` on ring `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Site {
    /// Position along the ring, `0 <= row < R`.
    pub row: usize,
    /// Ring index, `-N <= ring <= N`.
    pub ring: i32,
}

impl Site {
    pub fn new(row: usize, ring: i32) -> Self {
        Self { row, ring }
    }

    /// Canonical sort key: ring first, then row.
    pub(crate) fn canonical_key(&self) -> (i32, usize) {
        (self.ring, self.row)
    }
}
