//! Box splitting: domain bisection (DS) and complementary-box slicing (BS).

use serde::{Deserialize, Serialize};

use crate::interval::{Interval, IntervalBox};
use crate::model::{ConstraintSet, Ncsp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitter {
    Ds,
    Bs,
}

/// The parts produced by a split. For BS the first part is the core (the
/// complementary box itself); the rest are slabs outside it.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitOutcome {
    pub splitter: Splitter,
    pub parts: Vec<IntervalBox>,
}

/// An interval that can still be bisected under tolerance `eps`.
pub fn splittable(x: &Interval, eps: f64) -> bool {
    !x.is_empty() && x.width() > eps && !x.is_canonical()
}

/// Splittable components of `b`, ignoring constraint occurrence.
pub fn splittable_mask(b: &IntervalBox, eps: &[f64]) -> Vec<bool> {
    b.iter().zip(eps).map(|(x, &e)| splittable(x, e)).collect()
}

/// Variables that occur in a constraint of `set` and are still splittable.
pub fn active_mask(ncsp: &Ncsp, b: &IntervalBox, set: ConstraintSet, eps: &[f64]) -> Vec<bool> {
    let mut occurs = vec![false; b.dim()];
    for id in set.iter() {
        for &v in ncsp.constraint(id).vars() {
            occurs[v] = true;
        }
    }
    b.iter().zip(eps).zip(occurs).map(|((x, &e), o)| o && splittable(x, e)).collect()
}

/// Bisects the widest masked component at its midpoint, ties to the lowest
/// index. `None` when no component is masked.
pub fn ds(b: &IntervalBox, mask: &[bool]) -> Option<(IntervalBox, IntervalBox)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, x) in b.iter().enumerate() {
        if mask[i] && best.is_none_or(|(_, w)| x.width() > w) {
            best = Some((i, x.width()));
        }
    }
    let (i, _) = best?;
    let x = b[i];
    let mut m = x.midpoint();
    if !(x.lo() < m && m < x.hi()) {
        m = x.lo().next_up();
    }
    let mut left = b.clone();
    let mut right = b.clone();
    left[i] = Interval::new(x.lo(), m);
    right[i] = Interval::new(m, x.hi());
    Some((left, right))
}

/// Slices `b` around its complementary box `cb`.
///
/// A slab `[b.lo, cb.lo]` or `[cb.hi, b.hi]` on a masked component is cut
/// when its width is at least `frag_ratio` times the component width. Slabs
/// are cut widest first (ties: lower index, then lower side) and each cut
/// shrinks the remaining core. Returns `None` when nothing is cut.
pub fn bs(b: &IntervalBox, cb: &IntervalBox, frag_ratio: f64, mask: &[bool]) -> Option<SplitOutcome> {
    if cb.is_empty() {
        return None;
    }
    let cb = cb.intersect(b);
    let mut cands: Vec<(f64, usize, bool)> = Vec::new();
    for i in 0..b.dim() {
        if !mask[i] {
            continue;
        }
        let (x, c) = (b[i], cb[i]);
        let min_w = frag_ratio * x.width();
        let lower = c.lo() - x.lo();
        if lower > 0.0 && lower >= min_w {
            cands.push((lower, i, false));
        }
        let upper = x.hi() - c.hi();
        if upper > 0.0 && upper >= min_w {
            cands.push((upper, i, true));
        }
    }
    if cands.is_empty() {
        return None;
    }
    cands.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut core = b.clone();
    let mut slabs = Vec::with_capacity(cands.len());
    for (_, i, upper) in cands {
        let x = core[i];
        let mut slab = core.clone();
        if upper {
            slab[i] = Interval::new(cb[i].hi(), x.hi());
            core[i] = Interval::new(x.lo(), cb[i].hi());
        } else {
            slab[i] = Interval::new(x.lo(), cb[i].lo());
            core[i] = Interval::new(cb[i].lo(), x.hi());
        }
        slabs.push(slab);
    }
    let mut parts = Vec::with_capacity(slabs.len() + 1);
    parts.push(core);
    parts.extend(slabs);
    Some(SplitOutcome { splitter: Splitter::Bs, parts })
}
