// Shared by several test binaries; not every binary uses every helper.
#![allow(dead_code)]

//! Naive reference implementation used as an independent oracle.
//!
//! Everything here evaluates the defining formulas site by site over a plain
//! scatterer set: the jump gate as a literal product of factors, the one-step
//! map by materializing all three branch coefficients, the inverse by
//! exhaustive search, and state evolution as an explicit permutation of
//! occupation bits. None of it shares code with the packed kernel.

use std::collections::HashSet;

use rand::Rng;
use ring_gas::{Geometry, OccupationState, ScattererField, Site};

pub struct NaiveField {
    pub geometry: Geometry,
    pub scatterers: HashSet<(usize, i32)>,
}

impl NaiveField {
    pub fn new(geometry: Geometry, links: &[(usize, i32)]) -> Self {
        Self {
            geometry,
            scatterers: links.iter().copied().collect(),
        }
    }

    pub fn xi(&self, row: usize, link: i32) -> u8 {
        if !self.geometry.contains_link(link) {
            return 0;
        }
        u8::from(self.scatterers.contains(&(row, link)))
    }

    pub fn j(&self, row: usize, link: i32) -> u8 {
        self.xi(row, link) * (1 - self.xi(row, link - 1)) * (1 - self.xi(row, link + 1))
    }

    /// Materializes all three branch coefficients and checks that exactly
    /// one is active.
    pub fn tau(&self, site: Site) -> Site {
        let up = self.j(site.row, site.ring);
        let down = self.j(site.row, site.ring - 1);
        let stay = (1 - up) * (1 - down);
        assert_eq!(up + down + stay, 1, "branches not exclusive at {site:?}");
        let next_row = (site.row + 1) % self.geometry.ring_len();
        if up == 1 {
            Site::new(next_row, site.ring + 1)
        } else if down == 1 {
            Site::new(next_row, site.ring - 1)
        } else {
            Site::new(next_row, site.ring)
        }
    }

    /// Inverse by exhaustive search over the phase space.
    pub fn tau_inverse(&self, target: Site) -> Site {
        let mut found = None;
        for site in all_sites(&self.geometry) {
            if self.tau(site) == target {
                assert!(found.is_none(), "two preimages for {target:?}");
                found = Some(site);
            }
        }
        found.expect("no preimage; map is not onto")
    }
}

pub fn all_sites(geometry: &Geometry) -> Vec<Site> {
    let mut sites = Vec::with_capacity(geometry.site_count());
    for ring in geometry.rings() {
        for row in 0..geometry.ring_len() {
            sites.push(Site::new(row, ring));
        }
    }
    sites
}

/// Occupation bits keyed by site, advanced one step by the naive map.
pub fn naive_step(field: &NaiveField, occupied: &HashSet<Site>) -> HashSet<Site> {
    occupied.iter().map(|&site| field.tau(site)).collect()
}

pub fn occupied_sites(state: &OccupationState) -> HashSet<Site> {
    all_sites(state.geometry())
        .into_iter()
        .filter(|&s| state.get(s))
        .collect()
}

/// Random link set plus both representations of the same field.
pub fn random_field_pair<R: Rng>(
    geometry: Geometry,
    density: f64,
    rng: &mut R,
) -> (NaiveField, ScattererField) {
    let mut links = Vec::new();
    for row in 0..geometry.ring_len() {
        for link in geometry.links() {
            if rng.random_bool(density) {
                links.push((row, link));
            }
        }
    }
    let naive = NaiveField::new(geometry, &links);
    let packed = ScattererField::from_links(geometry, links).unwrap();
    (naive, packed)
}

pub fn random_state<R: Rng>(geometry: Geometry, density: f64, rng: &mut R) -> OccupationState {
    let mut state = OccupationState::empty(geometry);
    for site in all_sites(&geometry) {
        if rng.random_bool(density) {
            state.set(site, true);
        }
    }
    state
}
