//! Outward-rounded interval arithmetic and boxes of intervals.

pub mod round;

use std::fmt;

use serde::{Deserialize, Serialize};

use round::*;

/// A closed interval `[lo, hi]` of reals, or the empty interval.
///
/// `lo` is finite or `-inf`, `hi` is finite or `+inf`. The empty interval
/// has width 0 and midpoint 0.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const EMPTY: Interval = Interval { lo: f64::INFINITY, hi: f64::NEG_INFINITY };
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const NONNEG: Interval = Interval { lo: 0.0, hi: f64::INFINITY };

    /// `[lo, hi]`; empty when `lo > hi` or either bound is NaN.
    pub fn new(lo: f64, hi: f64) -> Interval {
        if !(lo <= hi) || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Interval::EMPTY;
        }
        // Normalize signed zeros so equal sets compare and print equal.
        Interval { lo: lo + 0.0, hi: hi + 0.0 }
    }

    pub fn point(x: f64) -> Interval {
        Interval::new(x, x)
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        !(self.lo <= self.hi)
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    /// True when no double lies strictly between the bounds.
    pub fn is_canonical(&self) -> bool {
        !self.is_empty() && (self.lo == self.hi || self.lo.next_up() == self.hi)
    }

    pub fn width(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    /// A double inside the interval, halfway when both bounds are finite.
    pub fn midpoint(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        match (self.lo.is_finite(), self.hi.is_finite()) {
            (true, true) => {
                let m = 0.5 * self.lo + 0.5 * self.hi;
                m.clamp(self.lo, self.hi)
            }
            (false, false) => 0.0,
            (false, true) => {
                if self.hi > 0.0 {
                    0.0
                } else {
                    -f64::MAX
                }
            }
            (true, false) => {
                if self.lo < 0.0 {
                    0.0
                } else {
                    f64::MAX
                }
            }
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Set inclusion; the empty interval is a subset of everything.
    pub fn subset_of(&self, other: &Interval) -> bool {
        self.is_empty() || (other.lo <= self.lo && self.hi <= other.hi)
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        if self.is_empty() {
            return *other;
        }
        if other.is_empty() {
            return *self;
        }
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    /// True when the interiors overlap.
    pub fn interior_overlaps(&self, other: &Interval) -> bool {
        !self.is_empty() && !other.is_empty() && self.lo.max(other.lo) < self.hi.min(other.hi)
    }

    pub fn add(self, y: Interval) -> Interval {
        if self.is_empty() || y.is_empty() {
            return Interval::EMPTY;
        }
        Interval::new(add_down(self.lo, y.lo), add_up(self.hi, y.hi))
    }

    pub fn sub(self, y: Interval) -> Interval {
        if self.is_empty() || y.is_empty() {
            return Interval::EMPTY;
        }
        Interval::new(sub_down(self.lo, y.hi), sub_up(self.hi, y.lo))
    }

    pub fn neg(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        Interval::new(-self.hi, -self.lo)
    }

    pub fn mul(self, y: Interval) -> Interval {
        if self.is_empty() || y.is_empty() {
            return Interval::EMPTY;
        }
        let (a, b, c, d) = (self.lo, self.hi, y.lo, y.hi);
        let lo = mul_down(a, c).min(mul_down(a, d)).min(mul_down(b, c)).min(mul_down(b, d));
        let hi = mul_up(a, c).max(mul_up(a, d)).max(mul_up(b, c)).max(mul_up(b, d));
        Interval::new(lo, hi)
    }

    /// Division by an interval that does not contain zero.
    fn div_nonzero(self, y: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, y.lo, y.hi);
        let (lo, hi) = if c > 0.0 {
            if a >= 0.0 {
                (div_down(a, d), div_up(b, c))
            } else if b <= 0.0 {
                (div_down(a, c), div_up(b, d))
            } else {
                (div_down(a, c), div_up(b, c))
            }
        } else if a >= 0.0 {
            (div_down(b, d), div_up(a, c))
        } else if b <= 0.0 {
            (div_down(b, c), div_up(a, d))
        } else {
            (div_down(b, d), div_up(a, d))
        };
        Interval::new(lo, hi)
    }

    /// Extended division as a union of at most two intervals.
    ///
    /// When `y` contains zero in its interior and `self` excludes zero, the
    /// exact quotient set is two disjoint rays; otherwise the second part is
    /// empty.
    pub fn div_extended(self, y: Interval) -> (Interval, Interval) {
        const E: Interval = Interval::EMPTY;
        if self.is_empty() || y.is_empty() {
            return (E, E);
        }
        if !y.contains(0.0) {
            return (self.div_nonzero(y), E);
        }
        if y.lo == 0.0 && y.hi == 0.0 {
            return (E, E);
        }
        if self.contains(0.0) {
            return (Interval::ENTIRE, E);
        }
        let (c, d) = (y.lo, y.hi);
        if self.lo > 0.0 {
            let a = self.lo;
            let neg = Interval::new(f64::NEG_INFINITY, div_up(a, c));
            let pos = Interval::new(div_down(a, d), f64::INFINITY);
            match (c < 0.0, d > 0.0) {
                (true, true) => (neg, pos),
                (false, _) => (pos, E),
                (true, false) => (neg, E),
            }
        } else {
            let b = self.hi;
            let neg = Interval::new(f64::NEG_INFINITY, div_up(b, d));
            let pos = Interval::new(div_down(b, c), f64::INFINITY);
            match (c < 0.0, d > 0.0) {
                (true, true) => (neg, pos),
                (false, _) => (neg, E),
                (true, false) => (pos, E),
            }
        }
    }

    /// Division; the hull of the extended quotient when `y` contains zero.
    pub fn div(self, y: Interval) -> Interval {
        let (a, b) = self.div_extended(y);
        a.hull(&b)
    }

    pub fn sqr(self) -> Interval {
        self.powi(2)
    }

    /// Integer power. Negative exponents go through reciprocal division.
    pub fn powi(self, n: i32) -> Interval {
        if self.is_empty() {
            return self;
        }
        if n == 0 {
            return Interval::point(1.0);
        }
        if n < 0 {
            let m = n.unsigned_abs();
            let (a, b) = (self.lo, self.hi);
            if a > 0.0 {
                return Interval::new(recip_powi_down(b, m), recip_powi_up(a, m));
            }
            if b < 0.0 {
                let (lo, hi) = (recip_powi_down(-a, m), recip_powi_up(-b, m));
                return if m.is_multiple_of(2) { Interval::new(lo, hi) } else { Interval::new(-hi, -lo) };
            }
            return Interval::point(1.0).div(self.powi(m as i32));
        }
        let n = n as u32;
        let down = |v: f64| if v >= 0.0 { powi_down(v, n) } else { -powi_up(-v, n) };
        let up = |v: f64| if v >= 0.0 { powi_up(v, n) } else { -powi_down(-v, n) };
        if n % 2 == 1 {
            return Interval::new(down(self.lo), up(self.hi));
        }
        let (a, b) = (self.lo, self.hi);
        if a >= 0.0 {
            Interval::new(powi_down(a, n), powi_up(b, n))
        } else if b <= 0.0 {
            Interval::new(powi_down(-b, n), powi_up(-a, n))
        } else {
            Interval::new(0.0, powi_up((-a).max(b), n))
        }
    }

    /// Real power `x^r`. Integral exponents use [`Interval::powi`]; otherwise
    /// the base is restricted to `x >= 0` (and `x > 0` when `r < 0`).
    pub fn pow_r(self, r: f64) -> Interval {
        if r.fract() == 0.0 && r.abs() <= 1024.0 {
            return self.powi(r as i32);
        }
        let x = self.intersect(&Interval::NONNEG);
        if x.is_empty() || (r < 0.0 && x.hi == 0.0) {
            return Interval::EMPTY;
        }
        if r > 0.0 {
            Interval::new(powr_down(x.lo, r), powr_up(x.hi, r))
        } else {
            Interval::new(powr_down(x.hi, r), powr_up(x.lo, r))
        }
    }

    pub fn sqrt(self) -> Interval {
        let x = self.intersect(&Interval::NONNEG);
        if x.is_empty() {
            return x;
        }
        Interval::new(sqrt_down(x.lo), sqrt_up(x.hi))
    }

    pub fn exp(self) -> Interval {
        if self.is_empty() {
            return self;
        }
        Interval::new(exp_down(self.lo), exp_up(self.hi))
    }

    /// Natural logarithm over `x > 0`; a zero lower bound maps to `-inf`.
    pub fn ln(self) -> Interval {
        let x = self.intersect(&Interval::NONNEG);
        if x.is_empty() || x.hi == 0.0 {
            return Interval::EMPTY;
        }
        Interval::new(ln_down(x.lo), ln_up(x.hi))
    }

    pub fn abs(self) -> Interval {
        if self.is_empty() || self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval::new(0.0, (-self.lo).max(self.hi))
        }
    }

    pub fn min(self, y: Interval) -> Interval {
        if self.is_empty() || y.is_empty() {
            return Interval::EMPTY;
        }
        Interval::new(self.lo.min(y.lo), self.hi.min(y.hi))
    }

    pub fn max(self, y: Interval) -> Interval {
        if self.is_empty() || y.is_empty() {
            return Interval::EMPTY;
        }
        Interval::new(self.lo.max(y.lo), self.hi.max(y.hi))
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "[empty]")
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// A Cartesian product of intervals, one per variable.
///
/// A box is empty as soon as one component is empty.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct IntervalBox {
    comps: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(comps: Vec<Interval>) -> IntervalBox {
        IntervalBox { comps }
    }

    pub fn from_bounds(bounds: &[(f64, f64)]) -> IntervalBox {
        IntervalBox::new(bounds.iter().map(|&(l, h)| Interval::new(l, h)).collect())
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.iter().any(Interval::is_empty)
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.comps
    }

    pub fn as_mut_slice(&mut self) -> &mut [Interval] {
        &mut self.comps
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.comps.iter()
    }

    pub fn intersect(&self, other: &IntervalBox) -> IntervalBox {
        debug_assert_eq!(self.dim(), other.dim());
        IntervalBox::new(self.comps.iter().zip(&other.comps).map(|(a, b)| a.intersect(b)).collect())
    }

    pub fn hull(&self, other: &IntervalBox) -> IntervalBox {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        IntervalBox::new(self.comps.iter().zip(&other.comps).map(|(a, b)| a.hull(b)).collect())
    }

    /// Set inclusion; an empty box is a subset of every box.
    pub fn subset_of(&self, other: &IntervalBox) -> bool {
        self.is_empty() || self.comps.iter().zip(&other.comps).all(|(a, b)| a.subset_of(b))
    }

    pub fn contains_point(&self, p: &[f64]) -> bool {
        self.comps.iter().zip(p).all(|(c, &x)| c.contains(x))
    }

    /// True when the interiors of the two boxes overlap.
    pub fn interior_overlaps(&self, other: &IntervalBox) -> bool {
        self.comps.iter().zip(&other.comps).all(|(a, b)| a.interior_overlaps(b))
    }

    pub fn widths(&self) -> Vec<f64> {
        self.comps.iter().map(Interval::width).collect()
    }

    pub fn max_width(&self) -> f64 {
        self.comps.iter().map(Interval::width).fold(0.0, f64::max)
    }

    /// Product of widths; 0 for an empty box.
    pub fn volume(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        self.comps.iter().map(Interval::width).product()
    }

    /// True when every component is canonical or no wider than its tolerance.
    pub fn eps_bounded(&self, eps: &[f64]) -> bool {
        self.comps.iter().zip(eps).all(|(c, &e)| c.is_canonical() || c.width() <= e)
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.comps.iter().map(Interval::midpoint).collect()
    }
}

impl std::ops::Index<usize> for IntervalBox {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.comps[i]
    }
}

impl std::ops::IndexMut<usize> for IntervalBox {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.comps[i]
    }
}

impl FromIterator<Interval> for IntervalBox {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        IntervalBox::new(iter.into_iter().collect())
    }
}
