//! Domain reduction (DR), complementary boxing (CB) and the feasibility
//! check (FC) built on them.
//!
//! Revising one comparison is done with forward/backward propagation over the
//! expression tape (HC4). DR iterates revisions to a fixpoint; CB contracts
//! with the relaxed negation of each constraint and takes the hull.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::interval::round;
use crate::interval::{Interval, IntervalBox};
use crate::model::expr::{apply_bin, apply_un, BinOp, Truth, UnOp};
use crate::model::tape::Node;
use crate::model::{Atom, Constraint, ConstraintSet, Ncsp};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractorConfig {
    /// A sweep must shrink some width by more than this fraction to continue.
    pub improvement_threshold: f64,
    pub max_sweeps: usize,
}

impl Default for ContractorConfig {
    fn default() -> Self {
        ContractorConfig { improvement_threshold: 0.01, max_sweeps: 50 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feasibility {
    Feasible,
    Infeasible,
    Unknown,
}

/// Narrows `b` to an enclosure of `b ∩ {atom holds}`. Returns false when
/// that set is provably empty; `b` is then unspecified.
pub fn revise_atom(atom: &Atom, b: &mut [Interval]) -> bool {
    let tape = atom.tape();
    let nodes = &tape.nodes;
    let mut v: Vec<Interval> = Vec::with_capacity(nodes.len());
    for node in nodes {
        let x = match node {
            Node::Const(c) => *c,
            Node::Var(k) => b[*k],
            Node::Bin(op, a, c) => apply_bin(*op, v[*a as usize], v[*c as usize]),
            Node::Un(op, a) => apply_un(*op, v[*a as usize]),
            Node::Pow(a, r) => v[*a as usize].pow_r(*r),
            Node::Piecewise { arms, otherwise } => {
                let mut acc = Interval::EMPTY;
                let mut done = false;
                for &(g, rel, body) in arms {
                    match rel.truth(v[g as usize]) {
                        Truth::False => {}
                        Truth::Unknown => acc = acc.hull(&v[body as usize]),
                        Truth::True => {
                            acc = acc.hull(&v[body as usize]);
                            done = true;
                            break;
                        }
                    }
                }
                if !done {
                    acc = acc.hull(&v[*otherwise as usize]);
                }
                acc
            }
        };
        v.push(x);
    }
    let root = nodes.len() - 1;
    v[root] = v[root].intersect(&atom.rel().admissible());
    if v[root].is_empty() {
        return false;
    }
    for i in (0..nodes.len()).rev() {
        if tape.frozen[i] {
            continue;
        }
        let z = v[i];
        let ok = match &nodes[i] {
            Node::Const(_) | Node::Piecewise { .. } => true,
            Node::Var(k) => {
                b[*k] = b[*k].intersect(&z);
                !b[*k].is_empty()
            }
            Node::Bin(op, a, c) => backward_bin(*op, z, &mut v, *a as usize, *c as usize),
            Node::Un(op, a) => {
                let a = *a as usize;
                let by = backward_un(*op, z, v[a]);
                narrow(&mut v, a, by)
            }
            Node::Pow(a, r) => {
                let a = *a as usize;
                let by = backward_pow(z, v[a], *r);
                narrow(&mut v, a, by)
            }
        };
        if !ok {
            return false;
        }
    }
    true
}

#[inline]
fn narrow(v: &mut [Interval], i: usize, by: Interval) -> bool {
    v[i] = v[i].intersect(&by);
    !v[i].is_empty()
}

/// Values `x` in `x0` with `x * y = z` for some `y` in `y0`.
fn solve_mul(z: Interval, y: Interval, x0: Interval) -> Interval {
    if z.contains(0.0) && y.contains(0.0) {
        return x0;
    }
    let (p, q) = z.div_extended(y);
    x0.intersect(&p).hull(&x0.intersect(&q))
}

fn backward_bin(op: BinOp, z: Interval, v: &mut [Interval], a: usize, c: usize) -> bool {
    match op {
        BinOp::Add => {
            let va = z.sub(v[c]);
            narrow(v, a, va) && {
                let vc = z.sub(v[a]);
                narrow(v, c, vc)
            }
        }
        BinOp::Sub => {
            let va = z.add(v[c]);
            narrow(v, a, va) && {
                let vc = v[a].sub(z);
                narrow(v, c, vc)
            }
        }
        BinOp::Mul => {
            let va = solve_mul(z, v[c], v[a]);
            narrow(v, a, va) && {
                let vc = solve_mul(z, v[a], v[c]);
                narrow(v, c, vc)
            }
        }
        BinOp::Div => {
            let va = z.mul(v[c]);
            narrow(v, a, va) && {
                let vc = solve_mul(v[a], z, v[c]);
                narrow(v, c, vc)
            }
        }
        BinOp::Min => {
            let lower = Interval::new(z.lo(), f64::INFINITY);
            if !(narrow(v, a, lower) && narrow(v, c, lower)) {
                return false;
            }
            if v[c].lo() > z.hi() {
                return narrow(v, a, z);
            }
            if v[a].lo() > z.hi() {
                return narrow(v, c, z);
            }
            true
        }
        BinOp::Max => {
            let upper = Interval::new(f64::NEG_INFINITY, z.hi());
            if !(narrow(v, a, upper) && narrow(v, c, upper)) {
                return false;
            }
            if v[c].hi() < z.lo() {
                return narrow(v, a, z);
            }
            if v[a].hi() < z.lo() {
                return narrow(v, c, z);
            }
            true
        }
    }
}

/// Hull of `x0 ∩ [-hi, -lo]` and `x0 ∩ [lo, hi]` for `r = [lo, hi] ⊆ [0, inf]`.
fn symmetric(x0: Interval, r: Interval) -> Interval {
    if r.is_empty() {
        return r;
    }
    x0.intersect(&r.neg()).hull(&x0.intersect(&r))
}

fn backward_un(op: UnOp, z: Interval, x0: Interval) -> Interval {
    let nonneg = z.intersect(&Interval::NONNEG);
    match op {
        UnOp::Neg => z.neg(),
        UnOp::Sqr => {
            if nonneg.is_empty() {
                return nonneg;
            }
            symmetric(x0, Interval::new(round::sqrt_down(nonneg.lo()), round::sqrt_up(nonneg.hi())))
        }
        UnOp::Sqrt => {
            if nonneg.is_empty() {
                return nonneg;
            }
            Interval::new(round::mul_down(nonneg.lo(), nonneg.lo()), round::mul_up(nonneg.hi(), nonneg.hi()))
        }
        UnOp::Exp => {
            if nonneg.is_empty() || nonneg.hi() == 0.0 {
                return Interval::EMPTY;
            }
            Interval::new(round::ln_down(nonneg.lo()), round::ln_up(nonneg.hi()))
        }
        UnOp::Ln => {
            if z.is_empty() {
                return z;
            }
            Interval::new(round::exp_down(z.lo()), round::exp_up(z.hi()))
        }
        UnOp::Abs => symmetric(x0, nonneg),
    }
}

/// Searches outward from `g` for a value where `ok` holds.
fn verified(g: f64, up: bool, ok: impl Fn(f64) -> bool) -> Option<f64> {
    if !g.is_finite() {
        return None;
    }
    let mut g = g;
    let mut step = (g.abs() * f64::EPSILON).max(f64::MIN_POSITIVE);
    for _ in 0..80 {
        if ok(g) {
            return Some(g);
        }
        g = if up { g + step } else { g - step };
        step *= 2.0;
    }
    None
}

/// Interval of `x >= 0` with `x^r` in `z`, for a monotone power on `[0, inf)`.
/// `f_down` and `f_up` bound the power from below and above.
fn inverse_power(z: Interval, r: f64, f_down: impl Fn(f64) -> f64, f_up: impl Fn(f64) -> f64) -> Interval {
    let z = z.intersect(&Interval::NONNEG);
    if z.is_empty() {
        return z;
    }
    let guess = |t: f64| t.powf(1.0 / r);
    if r > 0.0 {
        let lo = if z.lo() == 0.0 {
            0.0
        } else {
            verified(guess(z.lo()), false, |g| g <= 0.0 || f_up(g) <= z.lo()).map_or(0.0, |g| g.max(0.0))
        };
        let hi = if z.hi() == f64::INFINITY {
            f64::INFINITY
        } else {
            verified(guess(z.hi()), true, |g| f_down(g) >= z.hi()).unwrap_or(f64::INFINITY)
        };
        Interval::new(lo, hi)
    } else {
        let lo = if z.hi() == f64::INFINITY {
            0.0
        } else {
            verified(guess(z.hi()), false, |g| g <= 0.0 || f_down(g) >= z.hi()).map_or(0.0, |g| g.max(0.0))
        };
        let hi = if z.lo() == 0.0 {
            f64::INFINITY
        } else {
            verified(guess(z.lo()), true, |g| f_up(g) <= z.lo()).unwrap_or(f64::INFINITY)
        };
        Interval::new(lo, hi)
    }
}

fn backward_pow(z: Interval, x0: Interval, r: f64) -> Interval {
    if r.fract() == 0.0 && r.abs() <= 1024.0 {
        if r <= 0.0 {
            return Interval::ENTIRE;
        }
        let n = r as u32;
        let f_down = |g: f64| round::powi_down(g, n);
        let f_up = |g: f64| round::powi_up(g, n);
        if n.is_multiple_of(2) {
            return symmetric(x0, inverse_power(z, r, f_down, f_up));
        }
        // Odd powers are bijective; treat each sign separately.
        let pos = inverse_power(z, r, f_down, f_up);
        let neg = inverse_power(z.neg(), r, f_down, f_up).neg();
        return pos.hull(&neg);
    }
    inverse_power(z, r, |g| round::powr_down(g, r), |g| round::powr_up(g, r)).intersect(&Interval::NONNEG)
}

/// Revision of a possibly disjunctive constraint: hull over disjuncts.
pub fn revise_constraint(c: &Constraint, b: &mut [Interval]) -> bool {
    if let [atom] = c.atoms() {
        return revise_atom(atom, b);
    }
    let mut acc: Option<Vec<Interval>> = None;
    for atom in c.atoms() {
        let mut t = b.to_vec();
        if revise_atom(atom, &mut t) {
            acc = Some(match acc {
                None => t,
                Some(h) => h.iter().zip(&t).map(|(x, y)| x.hull(y)).collect(),
            });
        }
    }
    match acc {
        Some(h) => {
            b.copy_from_slice(&h);
            true
        }
        None => false,
    }
}

fn empty_box(n: usize) -> IntervalBox {
    IntervalBox::new(vec![Interval::EMPTY; n])
}

/// Contraction operators bound to one problem.
pub struct Contractor<'a> {
    ncsp: &'a Ncsp,
    cfg: ContractorConfig,
    dr_calls: Cell<u64>,
    cb_calls: Cell<u64>,
}

impl<'a> Contractor<'a> {
    pub fn new(ncsp: &'a Ncsp, cfg: ContractorConfig) -> Contractor<'a> {
        Contractor { ncsp, cfg, dr_calls: Cell::new(0), cb_calls: Cell::new(0) }
    }

    pub fn ncsp(&self) -> &'a Ncsp {
        self.ncsp
    }

    /// Number of DR and CB invocations so far.
    pub fn counts(&self) -> (u64, u64) {
        (self.dr_calls.get(), self.cb_calls.get())
    }

    /// Sweeps `sweep` until no width shrinks by more than the threshold.
    /// With a mask, unmasked components are restored afterwards.
    fn fixpoint(&self, b: &IntervalBox, mask: Option<&[bool]>, mut sweep: impl FnMut(&mut [Interval]) -> bool) -> IntervalBox {
        let mut cur = b.clone();
        if cur.is_empty() {
            return empty_box(b.dim());
        }
        for _ in 0..self.cfg.max_sweeps.max(1) {
            let before = cur.clone();
            if !sweep(cur.as_mut_slice()) || cur.is_empty() {
                return empty_box(b.dim());
            }
            let mut best = 0.0f64;
            for (x0, x1) in before.iter().zip(cur.iter()) {
                let (w0, w1) = (x0.width(), x1.width());
                let shrink = if w0.is_infinite() {
                    if w1.is_finite() {
                        1.0
                    } else {
                        0.0
                    }
                } else if w0 > 0.0 {
                    (w0 - w1) / w0
                } else {
                    0.0
                };
                best = best.max(shrink);
            }
            if best <= self.cfg.improvement_threshold {
                break;
            }
        }
        if let Some(mask) = mask {
            for (i, &active) in mask.iter().enumerate() {
                if !active {
                    cur[i] = b[i];
                }
            }
        }
        cur
    }

    /// Domain reduction of `b` by the constraints in `set`.
    pub fn dr(&self, b: &IntervalBox, set: ConstraintSet, mask: Option<&[bool]>) -> IntervalBox {
        self.dr_calls.set(self.dr_calls.get() + 1);
        let cs = self.ncsp.constraints();
        self.fixpoint(b, mask, |x| set.iter().all(|id| revise_constraint(&cs[id], x)))
    }

    /// Domain reduction by a conjunction of atoms.
    pub fn dr_atoms(&self, b: &IntervalBox, atoms: &[Atom], mask: Option<&[bool]>) -> IntervalBox {
        self.fixpoint(b, mask, |x| atoms.iter().all(|a| revise_atom(a, x)))
    }

    /// Complementary box of a single constraint: encloses the part of `b`
    /// where the constraint may fail.
    pub fn cb_one(&self, b: &IntervalBox, id: usize, mask: Option<&[bool]>) -> IntervalBox {
        self.cb_calls.set(self.cb_calls.get() + 1);
        self.dr_atoms(b, self.ncsp.constraint(id).relaxed_negation(), mask)
    }

    /// Complementary box of a set: hull of the per-constraint boxes.
    pub fn cb(&self, b: &IntervalBox, set: ConstraintSet, mask: Option<&[bool]>) -> IntervalBox {
        let mut acc = empty_box(b.dim());
        for id in set.iter() {
            acc = acc.hull(&self.cb_one(b, id, mask));
        }
        acc
    }

    /// Three-valued feasibility of `b` with respect to `set`.
    pub fn fc(&self, b: &IntervalBox, set: ConstraintSet) -> Feasibility {
        if set.is_empty() {
            return Feasibility::Feasible;
        }
        if self.dr(b, set, None).is_empty() {
            return Feasibility::Infeasible;
        }
        self.fc_feasible(b, set)
    }

    /// Feasible when the complementary box is empty, unknown otherwise.
    pub fn fc_feasible(&self, b: &IntervalBox, set: ConstraintSet) -> Feasibility {
        if set.iter().all(|id| self.cb_one(b, id, None).is_empty()) {
            Feasibility::Feasible
        } else {
            Feasibility::Unknown
        }
    }
}
