use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{Geometry, Site};
use crate::scatterer::ScattererField;

/// One cycle of the site map. `sites[0]` is the canonical representative
/// (lexicographically smallest `(ring, row)`), and the map sends each entry
/// to the next, wrapping at the end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    sites: Vec<Site>,
}

impl Orbit {
    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    /// First return time; always a positive multiple of `R` between `R` and
    /// `R (2N + 1)`.
    pub fn period(&self) -> usize {
        self.sites.len()
    }

    /// Number of distinct rings the orbit visits.
    pub fn ring_span(&self) -> usize {
        let mut rings: Vec<i32> = self.sites.iter().map(|s| s.ring).collect();
        rings.sort_unstable();
        rings.dedup();
        rings.len()
    }
}

/// Partition of the whole phase space into cycles, ordered by canonical
/// representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopDecomposition {
    geometry: Geometry,
    orbits: Vec<Orbit>,
}

impl LoopDecomposition {
    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn min_period(&self) -> usize {
        self.orbits.iter().map(Orbit::period).min().unwrap_or(0)
    }

    pub fn max_period(&self) -> usize {
        self.orbits.iter().map(Orbit::period).max().unwrap_or(0)
    }
}

/// The cycle through `start`, rotated to begin at its canonical minimal site.
pub fn orbit_of(field: &ScattererField, start: Site) -> Orbit {
    assert!(field.geometry().contains(start), "site out of range");
    let mut sites = Vec::new();
    let mut current = start;
    loop {
        sites.push(current);
        current = field.tau(current);
        if current == start {
            break;
        }
    }
    let min_pos = sites
        .iter()
        .enumerate()
        .min_by_key(|(_, s)| s.canonical_key())
        .map(|(pos, _)| pos)
        .expect("orbit is non-empty");
    sites.rotate_left(min_pos);
    Orbit { sites }
}

/// Visits every site once (scanning rings from `-N`, rows from 0) and returns
/// the full cycle partition. Runs in O(sites) time with a visited bitmap.
pub fn loop_decomposition(field: &ScattererField) -> LoopDecomposition {
    let geometry = *field.geometry();
    let ring_count = geometry.ring_count();
    let mut visited = vec![false; geometry.site_count()];
    let index = |s: Site| -> usize { s.row * ring_count + geometry.ring_bit(s.ring) };
    let mut orbits = Vec::new();
    for ring in geometry.rings() {
        for row in 0..geometry.ring_len() {
            let start = Site::new(row, ring);
            if visited[index(start)] {
                continue;
            }
            // The scan order makes `start` the canonical minimal site of its
            // cycle, so no rotation is needed.
            let mut sites = Vec::new();
            let mut current = start;
            loop {
                visited[index(current)] = true;
                sites.push(current);
                current = field.tau(current);
                if current == start {
                    break;
                }
            }
            orbits.push(Orbit { sites });
        }
    }
    LoopDecomposition { geometry, orbits }
}

/// Orbit count per period.
pub fn period_histogram(decomposition: &LoopDecomposition) -> BTreeMap<usize, usize> {
    let mut histogram = BTreeMap::new();
    for orbit in decomposition.orbits() {
        *histogram.entry(orbit.period()).or_insert(0) += 1;
    }
    histogram
}

/// Structured scatterer layouts whose orbits depart from the generic random
/// picture. These are demonstrations: ordered fields give ordered loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnomalousPattern {
    /// One scatterer on link `(row, link)`.
    Isolated { row: usize, link: i32 },
    /// Every stored link of one row occupied; all gates cancel, so the
    /// dynamics is identical to the empty field.
    SingleColumn { row: usize },
    /// One scatterer per link column, at row `offset + stride * i (mod R)`.
    /// Produces ballistic loops that sweep across many rings.
    Diagonal { stride: usize, offset: usize },
}

pub fn generate_anomalous_field(
    geometry: Geometry,
    pattern: AnomalousPattern,
) -> Result<ScattererField> {
    match pattern {
        AnomalousPattern::Isolated { row, link } => {
            if row >= geometry.ring_len() {
                return Err(Error::InvalidPattern(format!("row {row} out of range")));
            }
            if !geometry.contains_link(link) {
                return Err(Error::LinkOutOfRange(link));
            }
            ScattererField::from_links(geometry, [(row, link)])
        }
        AnomalousPattern::SingleColumn { row } => {
            if row >= geometry.ring_len() {
                return Err(Error::InvalidPattern(format!("row {row} out of range")));
            }
            ScattererField::from_links(geometry, geometry.links().map(|i| (row, i)))
        }
        AnomalousPattern::Diagonal { stride, offset } => {
            if stride == 0 {
                return Err(Error::InvalidPattern(
                    "diagonal stride must be >= 1".into(),
                ));
            }
            if offset >= geometry.ring_len() {
                return Err(Error::InvalidPattern(format!(
                    "offset {offset} out of range"
                )));
            }
            let r = geometry.ring_len() as i64;
            let links: Vec<(usize, i32)> = geometry
                .links()
                .map(|i| {
                    let row = (offset as i64 + stride as i64 * i64::from(i)).rem_euclid(r);
                    (row as usize, i)
                })
                .collect();
            ScattererField::from_links(geometry, links)
        }
    }
}
