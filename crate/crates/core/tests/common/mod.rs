//! Shared helpers for the integration tests: seeded sampling, witness
//! points, a disjointness sweep and random griddy sets.
#![allow(dead_code)]

pub mod dd;
pub mod evrsuite;
pub mod fuzz;
pub mod paving;
pub mod suites;

use bcs_core::model::{Atom, Constraint, Ncsp, Relation};
use bcs_core::search::PavingResult;
use bcs_core::{Interval, IntervalBox};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x5eed_b0c5;

/// Base seed, overridable through `BCS_SEED`.
pub fn seed() -> u64 {
    std::env::var("BCS_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

/// Independent deterministic stream for each `stream` label.
pub fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn stream_of(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3))
}

/// Uniform double in `x`, endpoints included occasionally.
pub fn sample_in(rng: &mut impl Rng, x: Interval) -> f64 {
    let (lo, hi) = (x.lo(), x.hi());
    if lo == hi {
        return lo;
    }
    match rng.random_range(0..32) {
        0 => lo,
        1 => hi,
        _ => {
            let t: f64 = rng.random();
            (lo + t * (hi - lo)).clamp(lo, hi)
        }
    }
}

pub fn point_in(rng: &mut impl Rng, b: &IntervalBox) -> Vec<f64> {
    b.iter().map(|&x| sample_in(rng, x)).collect()
}

/// Random non-empty sub-interval of `x`, sometimes degenerate.
pub fn sub_interval(rng: &mut impl Rng, x: Interval) -> Interval {
    let a = sample_in(rng, x);
    if rng.random_range(0..10) == 0 {
        return Interval::point(a);
    }
    let b = sample_in(rng, x);
    Interval::new(a.min(b), a.max(b))
}

/// Random sub-box whose widths span several orders of magnitude.
pub fn sub_box(rng: &mut impl Rng, b: &IntervalBox) -> IntervalBox {
    b.iter()
        .map(|&x| {
            let scale = 10f64.powi(-rng.random_range(0..4));
            let w = x.width() * scale;
            let room = Interval::new(x.lo(), (x.hi() - w).max(x.lo()));
            let lo = sample_in(rng, room);
            Interval::new(lo, (lo + w).min(x.hi()))
        })
        .collect()
}

/// `v rel 0` with the relation strictly satisfied by `margin * max(1, |v|)`.
pub fn strictly(rel: Relation, v: f64, margin: f64) -> bool {
    if v.is_nan() {
        return false;
    }
    let m = margin * v.abs().max(1.0);
    match rel {
        Relation::Le | Relation::Lt => v <= -m,
        Relation::Ge | Relation::Gt => v >= m,
        Relation::Ne => v.abs() >= m,
        Relation::Eq => false,
    }
}

pub fn atom_strictly(a: &Atom, p: &[f64], margin: f64) -> bool {
    strictly(a.rel(), a.expr().eval_point(p), margin)
}

pub fn constraint_strictly(c: &Constraint, p: &[f64], margin: f64) -> bool {
    c.atoms().iter().any(|a| atom_strictly(a, p, margin))
}

/// Violates every atom of `c` by at least the margin.
pub fn constraint_strictly_violated(c: &Constraint, p: &[f64], margin: f64) -> bool {
    c.atoms().iter().all(|a| {
        let v = a.expr().eval_point(p);
        match a.rel() {
            Relation::Eq => v.abs() >= margin * v.abs().max(1.0),
            r => strictly(r.negate(), v, margin),
        }
    })
}

pub fn strictly_feasible(p: &Ncsp, x: &[f64], margin: f64) -> bool {
    p.constraints().iter().all(|c| constraint_strictly(c, x, margin))
}

/// Up to `target` uniformly drawn domain points that satisfy every
/// constraint with relative margin `margin`.
pub fn witnesses(p: &Ncsp, margin: f64, target: usize, max_tries: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let dom = p.domain();
    let mut out = Vec::new();
    for _ in 0..max_tries {
        if out.len() >= target {
            break;
        }
        let x = point_in(rng, &dom);
        if strictly_feasible(p, &x, margin) {
            out.push(x);
        }
    }
    out
}

pub fn covered(r: &PavingResult, x: &[f64]) -> bool {
    r.inner.iter().any(|b| b.contains_point(x)) || r.boundary.iter().any(|b| b.bx.contains_point(x))
}

/// Pairs of boxes whose interiors overlap, found by a sweep on the first
/// coordinate. Stops after `limit` pairs.
pub fn overlapping_pairs(boxes: &[&IntervalBox], limit: usize) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..boxes.len()).collect();
    order.sort_by(|&a, &b| boxes[a][0].lo().total_cmp(&boxes[b][0].lo()));
    let mut active: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for &i in &order {
        let lo = boxes[i][0].lo();
        active.retain(|&j| boxes[j][0].hi() > lo);
        for &j in &active {
            if boxes[i].interior_overlaps(boxes[j]) {
                out.push((j.min(i), j.max(i)));
                if out.len() >= limit {
                    return out;
                }
            }
        }
        active.push(i);
    }
    out
}

pub fn all_boxes(r: &PavingResult) -> Vec<&IntervalBox> {
    r.inner.iter().chain(r.boundary.iter().map(|b| &b.bx)).collect()
}

/// Inner-box sampling: up to `per_box` points per box, at most `cap` in
/// total; returns the number of points that violate some constraint.
pub fn inner_violations(p: &Ncsp, r: &PavingResult, per_box: usize, cap: usize, slack: f64, rng: &mut impl Rng) -> (usize, usize) {
    if r.inner.is_empty() {
        return (0, 0);
    }
    let boxes = r.inner.len().min(cap / per_box.max(1)).max(1);
    let mut picks: Vec<usize> = (0..r.inner.len()).collect();
    if boxes < picks.len() {
        for k in 0..boxes {
            let j = rng.random_range(k..picks.len());
            picks.swap(k, j);
        }
        picks.truncate(boxes);
    }
    let mut tested = 0;
    let mut bad = 0;
    for &k in &picks {
        for _ in 0..per_box {
            let x = point_in(rng, &r.inner[k]);
            tested += 1;
            if !p.satisfies(&x, slack) {
                bad += 1;
            }
        }
    }
    (tested, bad)
}

/// A random griddy set: strictly increasing coordinates per dimension and a
/// random cell coloring, returned as the list of black cells.
#[derive(Clone, Debug)]
pub struct GriddySet {
    pub coords: Vec<Vec<f64>>,
    pub cells: Vec<Vec<usize>>,
}

impl GriddySet {
    pub fn random(rng: &mut impl Rng, dims: usize, max_cuts: usize) -> GriddySet {
        let coords: Vec<Vec<f64>> = (0..dims)
            .map(|_| {
                let n = rng.random_range(2..=max_cuts + 1);
                let mut v = Vec::with_capacity(n);
                let mut x = rng.random_range(-4i32..4) as f64;
                for _ in 0..n {
                    v.push(x);
                    x += [0.25, 0.5, 1.0, 2.0][rng.random_range(0..4)];
                }
                v
            })
            .collect();
        let density: f64 = rng.random_range(0.1..0.9);
        let mut cells = Vec::new();
        let shape: Vec<usize> = coords.iter().map(|c| c.len() - 1).collect();
        let total: usize = shape.iter().product();
        for flat in 0..total {
            if rng.random_bool(density) {
                let mut idx = Vec::with_capacity(dims);
                let mut f = flat;
                for &s in &shape {
                    idx.push(f % s);
                    f /= s;
                }
                cells.push(idx);
            }
        }
        GriddySet { coords, cells }
    }

    pub fn shape(&self) -> Vec<usize> {
        self.coords.iter().map(|c| c.len() - 1).collect()
    }

    pub fn cell_box(&self, idx: &[usize]) -> IntervalBox {
        idx.iter().enumerate().map(|(d, &i)| Interval::new(self.coords[d][i], self.coords[d][i + 1])).collect()
    }

    pub fn boxes(&self) -> Vec<IntervalBox> {
        self.cells.iter().map(|c| self.cell_box(c)).collect()
    }

    pub fn is_black(&self, idx: &[usize]) -> bool {
        self.cells.iter().any(|c| c.as_slice() == idx)
    }

    pub fn volume(&self) -> f64 {
        self.boxes().iter().map(IntervalBox::volume).sum()
    }
}

/// Whether `x` lies in the interior of some box.
pub fn in_interior(boxes: &[IntervalBox], x: &[f64]) -> bool {
    boxes.iter().any(|b| b.iter().zip(x).all(|(c, &v)| c.lo() < v && v < c.hi()))
}
