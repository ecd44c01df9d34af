//! Uniform cell subdivision of low-dimensional subproblems.

use crate::contract::{Contractor, Feasibility};
use crate::interval::{Interval, IntervalBox};
use crate::model::ConstraintSet;

/// Cells of a subdivided box, classified by the feasibility check.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DimStopOutput {
    pub inner: Vec<IntervalBox>,
    pub boundary: Vec<IntervalBox>,
    /// Cut points per dimension; a single interval for uncut dimensions.
    pub cuts: Vec<Vec<f64>>,
}

impl DimStopOutput {
    /// Number of cells a box made of whole cells spans along each dimension.
    pub fn cell_counts(&self, b: &IntervalBox) -> Vec<u32> {
        self.cuts
            .iter()
            .zip(b.iter())
            .map(|(c, x)| {
                let lo = c.partition_point(|&t| t < x.lo());
                let hi = c.partition_point(|&t| t < x.hi());
                (hi - lo).max(1) as u32
            })
            .collect()
    }
}

/// Fewest equal cuts of `x` whose pieces are all at most `eps` wide.
pub fn uniform_cuts(x: Interval, eps: f64) -> Vec<f64> {
    let (lo, hi) = (x.lo(), x.hi());
    let w = hi - lo;
    let mut n = ((w / eps).ceil() as usize).max(1);
    for _ in 0..64 {
        let mut cuts: Vec<f64> = (0..=n).map(|k| if k == n { hi } else { lo + w * (k as f64 / n as f64) }).collect();
        cuts.dedup();
        if cuts.windows(2).all(|p| p[1] - p[0] <= eps) {
            return cuts;
        }
        n += 1;
    }
    vec![lo, hi]
}

/// Splits the `active` dimensions of `b` into uniform cells no wider than
/// `eps` and classifies each cell. Inactive dimensions are kept whole.
pub fn dim_stop_solver(ctr: &Contractor, b: &IntervalBox, set: ConstraintSet, eps: &[f64], active: &[bool]) -> DimStopOutput {
    let cuts: Vec<Vec<f64>> =
        b.iter().zip(eps).zip(active).map(|((x, &e), &a)| if a { uniform_cuts(*x, e) } else { vec![x.lo(), x.hi()] }).collect();
    let mut out = DimStopOutput { cuts, ..Default::default() };
    if set.is_empty() {
        out.inner.push(b.clone());
        return out;
    }
    let dims: Vec<usize> = (0..b.dim()).filter(|&i| active[i]).collect();
    let shape: Vec<usize> = dims.iter().map(|&i| out.cuts[i].len() - 1).collect();
    let mut idx = vec![0usize; dims.len()];
    loop {
        let mut cell = b.clone();
        for (j, &i) in dims.iter().enumerate() {
            cell[i] = Interval::new(out.cuts[i][idx[j]], out.cuts[i][idx[j] + 1]);
        }
        match ctr.fc(&cell, set) {
            Feasibility::Feasible => out.inner.push(cell),
            Feasibility::Unknown => out.boundary.push(cell),
            Feasibility::Infeasible => {}
        }
        let mut d = dims.len();
        loop {
            if d == 0 {
                return out;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < shape[d] {
                break;
            }
            idx[d] = 0;
        }
    }
}
