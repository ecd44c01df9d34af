//! Sampling suites for the contraction operators, shared by the property
//! tests and the acceptance run.

use bcs_core::contract::{Contractor, ContractorConfig, Feasibility};
use bcs_core::model::{ConstraintSet, Ncsp};
use bcs_core::IntervalBox;
use rand::Rng;

use super::{constraint_strictly, constraint_strictly_violated, point_in, sub_box};

/// Number of checks made and the failures found.
#[derive(Debug, Default)]
pub struct Tally {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(msg());
        }
    }

    pub fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        let room = 20usize.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Margin that keeps point evaluation errors from deciding a relation.
pub const POINT_MARGIN: f64 = 1e-9;

fn single(id: usize) -> ConstraintSet {
    let mut s = ConstraintSet::empty();
    s.insert(id);
    s
}

fn random_set(rng: &mut impl Rng, n: usize) -> ConstraintSet {
    let mut s = ConstraintSet::empty();
    while s.is_empty() {
        for id in 0..n {
            if rng.random_bool(0.5) {
                s.insert(id);
            }
        }
    }
    s
}

/// A random sub-box of the domain.
fn trial_box(p: &Ncsp, rng: &mut impl Rng) -> IntervalBox {
    sub_box(rng, &p.domain())
}

/// Points of `b` that satisfy `c` stay in `DR(b, {c})`, which lies in `b`.
pub fn dr_contract(p: &Ncsp, boxes: usize, points: usize, rng: &mut impl Rng) -> Tally {
    let ctr = Contractor::new(p, ContractorConfig::default());
    let mut t = Tally::default();
    for _ in 0..boxes {
        let b = trial_box(p, rng);
        let id = rng.random_range(0..p.constraints().len());
        let c = p.constraint(id);
        let r = ctr.dr(&b, single(id), None);
        t.check(r.subset_of(&b), || format!("{}: DR({b:?}) = {r:?} not inside", p.name()));
        for _ in 0..points {
            let x = point_in(rng, &b);
            if constraint_strictly(c, &x, POINT_MARGIN) {
                t.check(r.contains_point(&x), || format!("{}: c{id} point {x:?} lost by DR({b:?}) = {r:?}", p.name()));
            }
        }
    }
    t
}

/// Points of `b` outside `CB(b, C)` satisfy every constraint of `C`.
pub fn cb_complement(p: &Ncsp, boxes: usize, points: usize, rng: &mut impl Rng) -> Tally {
    let ctr = Contractor::new(p, ContractorConfig::default());
    let mut t = Tally::default();
    for _ in 0..boxes {
        let b = trial_box(p, rng);
        let set = random_set(rng, p.constraints().len());
        let cb = ctr.cb(&b, set, None);
        t.check(cb.subset_of(&b), || format!("{}: CB not inside the box", p.name()));
        for _ in 0..points {
            let x = point_in(rng, &b);
            if cb.contains_point(&x) {
                continue;
            }
            for id in set.iter() {
                let c = p.constraint(id);
                t.check(c.holds_at(&x, POINT_MARGIN), || {
                    format!("{}: c{id} fails at {x:?} outside CB({b:?}) = {cb:?}", p.name())
                });
            }
        }
    }
    t
}

/// CB of a single constraint contracts with respect to its relaxed negation:
/// points violating the constraint stay inside.
pub fn cb_duality(p: &Ncsp, boxes: usize, points: usize, rng: &mut impl Rng) -> Tally {
    let ctr = Contractor::new(p, ContractorConfig::default());
    let mut t = Tally::default();
    for _ in 0..boxes {
        let b = trial_box(p, rng);
        let id = rng.random_range(0..p.constraints().len());
        let c = p.constraint(id);
        let cb = ctr.cb_one(&b, id, None);
        t.check(cb.subset_of(&b), || format!("{}: CB not inside the box", p.name()));
        for _ in 0..points {
            let x = point_in(rng, &b);
            if constraint_strictly_violated(c, &x, POINT_MARGIN) {
                t.check(cb.contains_point(&x), || format!("{}: c{id} violator {x:?} outside CB({b:?}) = {cb:?}", p.name()));
            }
        }
    }
    t
}

/// A second DR shrinks no width by more than the improvement threshold.
pub fn dr_idempotence(p: &Ncsp, boxes: usize, rng: &mut impl Rng) -> Tally {
    let cfg = ContractorConfig::default();
    let ctr = Contractor::new(p, cfg);
    let mut t = Tally::default();
    for _ in 0..boxes {
        let b = trial_box(p, rng);
        let set = random_set(rng, p.constraints().len());
        let d1 = ctr.dr(&b, set, None);
        if d1.is_empty() {
            continue;
        }
        let d2 = ctr.dr(&d1, set, None);
        let ok = !d2.is_empty()
            && d1.iter().zip(d2.iter()).all(|(x1, x2)| {
                let (w1, w2) = (x1.width(), x2.width());
                w1 == 0.0 || w1.is_infinite() || (w1 - w2) / w1 <= cfg.improvement_threshold
            });
        t.check(ok, || format!("{}: DR not idempotent on {b:?}: {d1:?} -> {d2:?}", p.name()));
    }
    t
}

/// Nested pairs `b ⊆ b'`: an unknown verdict on `b` should stay unknown on
/// `b'`. Returns (pairs with unknown inner verdict, non-monotone pairs).
pub fn fc_monotonicity(p: &Ncsp, pairs: usize, rng: &mut impl Rng) -> (usize, usize) {
    let ctr = Contractor::new(p, ContractorConfig::default());
    let all = p.all_constraints();
    let (mut unknown, mut bad) = (0, 0);
    for _ in 0..pairs {
        let outer = trial_box(p, rng);
        let inner = sub_box(rng, &outer);
        if ctr.fc(&inner, all) == Feasibility::Unknown {
            unknown += 1;
            if ctr.fc(&outer, all) != Feasibility::Unknown {
                bad += 1;
            }
        }
    }
    (unknown, bad)
}
