use crate::diffusion::empirical_density;
use crate::error::{Error, Result};
use crate::geometry::Geometry;
use crate::rows::tail_mask;
use crate::scatterer::ScattererField;
use crate::state::OccupationState;

/// Pair and jump counts across one link, taken at a fixed time.
///
/// `x_right` counts rows whose particle actually jumps from ring `i` to
/// `i+1` this step (occupied left, vacant right, gate on); `xhat_right`
/// drops the gate condition and counts all occupied/vacant pairs. `x_left`
/// and `xhat_left` mirror them. Always `x <= xhat <= R`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LinkFlux {
    pub x_right: u64,
    pub x_left: u64,
    pub xhat_right: u64,
    pub xhat_left: u64,
}

/// Flux counts for every stored link, indexed `-N ..= N-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FluxCounts {
    geometry: Geometry,
    links: Vec<LinkFlux>,
}

impl FluxCounts {
    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    /// Counts across link `i`; links outside `[-N, N-1]` are all zero.
    pub fn link(&self, link: i32) -> LinkFlux {
        if !self.geometry.contains_link(link) {
            return LinkFlux::default();
        }
        self.links[self.geometry.link_bit(link)]
    }

    /// All stored links, ring `-N` side first.
    pub fn links(&self) -> &[LinkFlux] {
        &self.links
    }

    /// Net particle gain of ring `i` implied by the counts.
    pub fn net_gain(&self, ring: i32) -> i64 {
        let from_right = self.link(ring);
        let from_left = self.link(ring - 1);
        (from_right.x_left as i64 - from_right.x_right as i64)
            + (from_left.x_right as i64 - from_left.x_left as i64)
    }
}

/// Counts, for every link, the occupied/vacant pairs and the subset that
/// actually jumps this step.
pub fn flux_counts(state: &OccupationState, field: &ScattererField) -> Result<FluxCounts> {
    let geometry = *state.geometry();
    if field.geometry() != &geometry {
        return Err(Error::GeometryMismatch);
    }
    let link_count = geometry.link_count();
    let mut links = vec![LinkFlux::default(); link_count];
    if link_count == 0 {
        return Ok(FluxCounts { geometry, links });
    }
    let words = link_count.div_ceil(64);
    let last_mask = tail_mask(link_count);
    for row in 0..geometry.ring_len() {
        let occ = state.row_words(row);
        let (gates, _) = field.swap_rows(row);
        for w in 0..words {
            let here = occ[w];
            // Bit q of `above` is the occupation of ring q+1.
            let above = (here >> 1) | if w + 1 < occ.len() { occ[w + 1] << 63 } else { 0 };
            let mask = if w + 1 == words { last_mask } else { u64::MAX };
            let right_pairs = here & !above & mask;
            let left_pairs = !here & above & mask;
            let gate = gates[w];
            accumulate(&mut links, w, right_pairs, |f| &mut f.xhat_right);
            accumulate(&mut links, w, left_pairs, |f| &mut f.xhat_left);
            accumulate(&mut links, w, right_pairs & gate, |f| &mut f.x_right);
            accumulate(&mut links, w, left_pairs & gate, |f| &mut f.x_left);
        }
    }
    Ok(FluxCounts { geometry, links })
}

fn accumulate(
    links: &mut [LinkFlux],
    word: usize,
    mut bits: u64,
    slot: impl Fn(&mut LinkFlux) -> &mut u64,
) {
    while bits != 0 {
        let b = bits.trailing_zeros() as usize;
        *slot(&mut links[word * 64 + b]) += 1;
        bits &= bits - 1;
    }
}

/// Exact per-ring balance: the change of each ring count over one step must
/// equal inflow minus outflow from the jump counts, on every microstate.
/// Returns the residuals (all zero); errors if the states are not one
/// forward step apart.
pub fn verify_flux_identity(
    state_t: &OccupationState,
    state_t1: &OccupationState,
    field: &ScattererField,
) -> Result<Vec<i64>> {
    if state_t.geometry() != state_t1.geometry() || field.geometry() != state_t.geometry() {
        return Err(Error::GeometryMismatch);
    }
    if state_t1.time() != state_t.time() + 1 {
        return Err(Error::StatesNotAdjacent);
    }
    let mut recomputed = state_t.clone();
    recomputed.step(field)?;
    if &recomputed != state_t1 {
        return Err(Error::StatesNotAdjacent);
    }
    let counts = flux_counts(state_t, field)?;
    let before = state_t.ring_counts();
    let after = state_t1.ring_counts();
    let geometry = state_t.geometry();
    Ok(geometry
        .rings()
        .map(|ring| {
            let idx = geometry.ring_bit(ring);
            let delta = after[idx] as i64 - before[idx] as i64;
            delta - counts.net_gain(ring)
        })
        .collect())
}

/// Molecular-chaos diagnostics for the rightward flux across `link`.
///
/// Returns `(a, b)` where `a` compares the actual jump rate against the
/// expected gate times the pair rate, and `b` compares the pair rate against
/// the product of ring densities. Both are diagnostics of the two closure
/// assumptions; neither is asserted to vanish. The expected gate is
/// `mu (1-mu)^2` on interior links and `mu (1-mu)` on the two
/// boundary-adjacent links, which require `allow_boundary`.
pub fn molecular_chaos_residual(
    state: &OccupationState,
    field: &ScattererField,
    mu: f64,
    link: i32,
    allow_boundary: bool,
) -> Result<(f64, f64)> {
    let geometry = *state.geometry();
    if field.geometry() != &geometry {
        return Err(Error::GeometryMismatch);
    }
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::InvalidProbability(mu));
    }
    if !geometry.contains_link(link) {
        return Err(Error::LinkOutOfRange(link));
    }
    let boundary = link == geometry.min_ring() || link == geometry.max_ring() - 1;
    if boundary && !allow_boundary {
        return Err(Error::BoundaryLink(link));
    }
    let expected_gate = if boundary {
        mu * (1.0 - mu)
    } else {
        mu * (1.0 - mu) * (1.0 - mu)
    };
    let counts = flux_counts(state, field)?.link(link);
    let r = geometry.ring_len() as f64;
    let density = empirical_density(state);
    let a = counts.x_right as f64 / r - expected_gate * counts.xhat_right as f64 / r;
    let b = counts.xhat_right as f64 / r - density.value(link) * (1.0 - density.value(link + 1));
    Ok((a, b))
}
