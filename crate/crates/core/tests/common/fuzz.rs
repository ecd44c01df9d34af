//! Random interval operations checked against the double-double oracle.

use std::cmp::Ordering;

use bcs_core::Interval;
use rand::Rng;

use super::dd::Dd;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Abs,
    Sqr,
    Sqrt,
    Exp,
    Ln,
    Powi(i32),
    PowR(f64),
    Min,
    Max,
}

pub const OPS: &[Op] = &[
    Op::Add,
    Op::Sub,
    Op::Mul,
    Op::Div,
    Op::Neg,
    Op::Abs,
    Op::Sqr,
    Op::Sqrt,
    Op::Exp,
    Op::Ln,
    Op::Powi(3),
    Op::Powi(4),
    Op::Powi(5),
    Op::Powi(-1),
    Op::Powi(-2),
    Op::Powi(-3),
    Op::PowR(0.5),
    Op::PowR(1.5),
    Op::PowR(1.2),
    Op::PowR(0.2),
    Op::PowR(0.1),
    Op::PowR(-1.0 / 3.0),
    Op::PowR(-0.5),
    Op::Min,
    Op::Max,
];

impl Op {
    pub fn is_binary(self) -> bool {
        matches!(self, Op::Add | Op::Sub | Op::Mul | Op::Div | Op::Min | Op::Max)
    }

    pub fn apply(self, x: Interval, y: Interval) -> Interval {
        match self {
            Op::Add => x.add(y),
            Op::Sub => x.sub(y),
            Op::Mul => x.mul(y),
            Op::Div => x.div(y),
            Op::Neg => x.neg(),
            Op::Abs => x.abs(),
            Op::Sqr => x.sqr(),
            Op::Sqrt => x.sqrt(),
            Op::Exp => x.exp(),
            Op::Ln => x.ln(),
            Op::Powi(n) => x.powi(n),
            Op::PowR(r) => x.pow_r(r),
            Op::Min => x.min(y),
            Op::Max => x.max(y),
        }
    }

    /// Exact value at a point, `None` outside the natural domain.
    pub fn exact(self, a: f64, b: f64) -> Option<Dd> {
        let (da, db) = (Dd::from(a), Dd::from(b));
        Some(match self {
            Op::Add => da.add(db),
            Op::Sub => da.sub(db),
            Op::Mul => da.mul(db),
            Op::Div => {
                if b == 0.0 {
                    return None;
                }
                da.div(db)
            }
            Op::Neg => da.neg(),
            Op::Abs => Dd::from(a.abs()),
            Op::Sqr => da.sqr(),
            Op::Sqrt => {
                if a < 0.0 {
                    return None;
                }
                da.sqrt()
            }
            Op::Exp => da.exp(),
            Op::Ln => {
                if a <= 0.0 {
                    return None;
                }
                da.ln()
            }
            Op::Powi(n) => {
                if n < 0 && a == 0.0 {
                    return None;
                }
                da.powi(n)
            }
            Op::PowR(r) => {
                if a < 0.0 || (a == 0.0 && r < 0.0) {
                    return None;
                }
                da.powr(r)
            }
            Op::Min => Dd::from(a.min(b)),
            Op::Max => Dd::from(a.max(b)),
        })
    }

    /// Exact range endpoints over `x` (and `y`), where the operation is
    /// monotone on the pieces used. `None` when the range is unbounded or
    /// not computed here.
    pub fn exact_range(self, x: Interval, y: Interval) -> Option<(Dd, Dd)> {
        let (a, b) = (x.lo(), x.hi());
        let ext = |vals: &[Dd]| {
            let lo = vals.iter().copied().reduce(Dd::min)?;
            let hi = vals.iter().copied().reduce(Dd::max)?;
            Some((lo, hi))
        };
        match self {
            Op::Add | Op::Sub | Op::Mul | Op::Min | Op::Max => {
                let mut v = Vec::with_capacity(4);
                for p in [a, b] {
                    for q in [y.lo(), y.hi()] {
                        v.push(self.exact(p, q)?);
                    }
                }
                ext(&v)
            }
            Op::Div => {
                if y.contains(0.0) {
                    return None;
                }
                let mut v = Vec::with_capacity(4);
                for p in [a, b] {
                    for q in [y.lo(), y.hi()] {
                        v.push(self.exact(p, q)?);
                    }
                }
                ext(&v)
            }
            Op::Neg => ext(&[Dd::from(-a), Dd::from(-b)]),
            Op::Abs | Op::Sqr | Op::Powi(_) => {
                let n = match self {
                    Op::Powi(n) => n,
                    _ => 2,
                };
                if n < 0 && x.contains(0.0) {
                    return None;
                }
                let mut v = vec![self.exact(a, 0.0)?, self.exact(b, 0.0)?];
                if x.contains(0.0) {
                    v.push(self.exact(0.0, 0.0)?);
                }
                ext(&v)
            }
            Op::Sqrt | Op::Exp | Op::Ln | Op::PowR(_) => {
                let lo = match self {
                    Op::Exp => a,
                    _ => a.max(0.0),
                };
                if lo > b {
                    return None;
                }
                if lo == 0.0 && matches!(self, Op::Ln) {
                    return Some((Dd::from(f64::NEG_INFINITY), self.exact(b, 0.0)?));
                }
                ext(&[self.exact(lo, 0.0)?, self.exact(b, 0.0)?])
            }
        }
    }

    /// Relative error bound of the oracle for this operation.
    fn oracle_tol(self) -> f64 {
        match self {
            Op::Add | Op::Sub | Op::Mul | Op::Neg | Op::Abs | Op::Min | Op::Max | Op::Sqr => 0.0,
            _ => 2f64.powi(-96),
        }
    }
}

/// Whether `lo <= v` after allowing the oracle error `tol * |v|`.
fn below(lo: f64, v: Dd, tol: f64) -> bool {
    if lo == f64::NEG_INFINITY {
        return true;
    }
    match v.cmp_f64(lo) {
        Ordering::Greater | Ordering::Equal => true,
        Ordering::Less => tol > 0.0 && v.ulps_from(lo) <= tol * v.hi.abs() / ulp(v.hi),
    }
}

fn above(hi: f64, v: Dd, tol: f64) -> bool {
    below(-hi, v.neg(), tol)
}

fn ulp(x: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        f64::from_bits(1)
    } else {
        a.next_up() - a
    }
}

/// Checks one trial: inclusion of the exact point value, and endpoints that
/// are never inward and at most `max_ulps` from the exact range.
pub fn check(op: Op, x: Interval, y: Interval, a: f64, b: f64, max_ulps: f64) -> Result<(), String> {
    let r = op.apply(x, y);
    let tol = op.oracle_tol();
    if let Some(v) = op.exact(a, b) {
        if v.hi.is_nan() {
            return Err(format!("{op:?}: oracle failed at ({a:e}, {b:e})"));
        }
        if r.is_empty() || !below(r.lo(), v, tol) || !above(r.hi(), v, tol) {
            return Err(format!("{op:?} x={x} y={y} a={a:e} b={b:e}: {:e} not in {r}", v.hi));
        }
    }
    if let Some((lo, hi)) = op.exact_range(x, y) {
        if !below(r.lo(), lo, tol) || !above(r.hi(), hi, tol) {
            return Err(format!("{op:?} x={x} y={y}: inward result {r} vs [{:e}, {:e}]", lo.hi, hi.hi));
        }
        let (ul, uh) = (lo.ulps_from(r.lo()), hi.ulps_from(r.hi()));
        if ul > max_ulps || uh > max_ulps {
            return Err(format!("{op:?} x={x} y={y}: {r} is {ul:.2}/{uh:.2} ulps from [{:e}, {:e}]", lo.hi, hi.hi));
        }
    }
    Ok(())
}

/// A random double of the kind the solver meets: moderate ranges, small
/// magnitudes, integers and signed zeros.
pub fn number(rng: &mut impl Rng, max_abs: f64) -> f64 {
    let v = match rng.random_range(0..8) {
        0 => rng.random_range(-10i32..=10) as f64,
        1 => 0.0,
        2 => rng.random_range(-1.0..1.0) * 1e-3,
        3 => {
            let e = rng.random_range(-40.0..40.0f64);
            let s = if rng.random_bool(0.5) { -1.0 } else { 1.0 };
            s * 10f64.powf(e)
        }
        _ => rng.random_range(-100.0..100.0),
    };
    v.clamp(-max_abs, max_abs)
}

pub fn interval(rng: &mut impl Rng, max_abs: f64) -> Interval {
    let a = number(rng, max_abs);
    let b = match rng.random_range(0..6) {
        0 => a,
        1 => a + rng.random_range(0.0..1e-6) * a.abs().max(1.0),
        _ => number(rng, max_abs),
    };
    Interval::new(a.min(b), a.max(b))
}

pub fn point(rng: &mut impl Rng, x: Interval) -> f64 {
    super::sample_in(rng, x)
}

/// Input magnitude limit keeping every exact result in the normal range.
pub fn max_abs(op: Op) -> f64 {
    match op {
        Op::Exp => 700.0,
        Op::Powi(n) if n.abs() >= 3 => 1e40,
        Op::PowR(_) => 1e30,
        _ => 1e100,
    }
}

/// One random trial of a random operation.
pub fn trial(rng: &mut impl Rng, max_ulps: f64) -> Result<(), String> {
    let op = OPS[rng.random_range(0..OPS.len())];
    let m = max_abs(op);
    let mut x = interval(rng, m);
    // Keep magnitudes away from the subnormal range for negative powers.
    if matches!(op, Op::Powi(n) if n < 0) || matches!(op, Op::PowR(r) if r < 0.0) {
        let fix = |v: f64| if v != 0.0 && v.abs() < 1e-30 { 0.0 } else { v };
        x = Interval::new(fix(x.lo()), fix(x.hi()));
    }
    let y = if op.is_binary() { interval(rng, m) } else { Interval::point(0.0) };
    let a = point(rng, x);
    let b = point(rng, y);
    check(op, x, y, a, b, max_ulps)
}
