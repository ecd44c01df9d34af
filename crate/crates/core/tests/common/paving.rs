//! Post-hoc checks of a paving against its problem.

use bcs_core::model::Ncsp;
use bcs_core::search::{precision_violation, PavingResult};
use rand::Rng;

use super::{all_boxes, covered, inner_violations, overlapping_pairs};

/// Slack allowed when testing sampled inner points.
pub const SOUNDNESS_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, Default)]
pub struct Summary {
    pub inner_boxes: usize,
    pub boundary_boxes: usize,
    pub inner_volume: f64,
    pub outer_volume: f64,
    pub wall_s: f64,
    pub sampled: usize,
    pub unsound: usize,
    pub witnesses: usize,
    pub uncovered: usize,
    pub first_uncovered: Option<Vec<f64>>,
    pub imprecise: usize,
}

impl Summary {
    pub fn total_boxes(&self) -> usize {
        self.inner_boxes + self.boundary_boxes
    }

    pub fn ratio(&self) -> f64 {
        if self.outer_volume > 0.0 {
            self.inner_volume / self.outer_volume
        } else {
            f64::NAN
        }
    }
}

/// Soundness sampling of the inner boxes (100 points per box, at most 10^5
/// in total), witness coverage and the precision contract.
pub fn summarize(p: &Ncsp, r: &PavingResult, witnesses: &[Vec<f64>], rng: &mut impl Rng) -> Summary {
    let (sampled, unsound) = inner_violations(p, r, 100, 100_000, SOUNDNESS_SLACK, rng);
    let mut uncovered = 0;
    let mut first_uncovered = None;
    for w in witnesses {
        if !covered(r, w) {
            uncovered += 1;
            first_uncovered.get_or_insert_with(|| w.clone());
        }
    }
    let imprecise = r.boundary.iter().filter(|b| precision_violation(p, b, &r.eps).is_some()).count();
    Summary {
        inner_boxes: r.inner.len(),
        boundary_boxes: r.boundary.len(),
        inner_volume: r.stats.inner_volume,
        outer_volume: r.stats.outer_volume,
        wall_s: r.stats.wall_time_s,
        sampled,
        unsound,
        witnesses: witnesses.len(),
        uncovered,
        first_uncovered,
        imprecise,
    }
}

/// Number of overlapping box pairs, up to `limit`.
pub fn overlaps(r: &PavingResult, limit: usize) -> usize {
    overlapping_pairs(&all_boxes(r), limit).len()
}
