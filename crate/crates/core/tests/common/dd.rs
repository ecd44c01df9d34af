//! Double-double arithmetic used as a high-precision reference.
//!
//! Values are unevaluated sums `hi + lo` with `|lo| <= ulp(hi) / 2`, good to
//! roughly 100 bits for the operations below.

use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.319_046_813_846_299_6e-17 };

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
}

fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd { hi: p, lo: a.mul_add(b, -p) }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite()
    }

    pub fn add(self, o: Dd) -> Dd {
        if !self.hi.is_finite() || !o.hi.is_finite() {
            return Dd::from(self.hi + o.hi);
        }
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let u = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(u.hi, u.lo + t.lo)
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        if !self.hi.is_finite() || !o.hi.is_finite() {
            return Dd::from(self.hi * o.hi);
        }
        let p = two_prod(self.hi, o.hi);
        quick_two_sum(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }

    pub fn mul_f(self, x: f64) -> Dd {
        self.mul(Dd::from(x))
    }

    pub fn div(self, o: Dd) -> Dd {
        if !self.hi.is_finite() || !o.hi.is_finite() || o.hi == 0.0 {
            return Dd::from(self.hi / o.hi);
        }
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f(q2));
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2).add(Dd::from(q3))
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from(if self.hi == 0.0 { 0.0 } else { f64::NAN });
        }
        let s = self.hi.sqrt();
        let r = self.sub(two_prod(s, s));
        quick_two_sum(s, r.hi / (2.0 * s))
    }

    pub fn sqr(self) -> Dd {
        self.mul(self)
    }

    /// `self^n` by repeated squaring; relative error a few units of 2^-100.
    pub fn powi(self, n: i32) -> Dd {
        let mut m = n.unsigned_abs();
        let mut acc = Dd::ONE;
        let mut base = self;
        while m > 0 {
            if m & 1 == 1 {
                acc = acc.mul(base);
            }
            m >>= 1;
            if m > 0 {
                base = base.sqr();
            }
        }
        if n < 0 {
            Dd::ONE.div(acc)
        } else {
            acc
        }
    }

    pub fn exp(self) -> Dd {
        if self.hi > 709.78 {
            return Dd::from(f64::INFINITY);
        }
        if self.hi < -745.2 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN2.hi).round();
        let r = self.sub(LN2.mul_f(k));
        // exp(r) = exp(r / 32)^32 with a Taylor series.
        let s = r.mul_f(1.0 / 32.0);
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for i in 1..=22 {
            term = term.mul(s).div(Dd::from(i as f64));
            sum = sum.add(term);
        }
        for _ in 0..5 {
            sum = sum.sqr();
        }
        let scale = 2f64.powi(k as i32);
        if scale == 0.0 || scale.is_infinite() {
            // Split the scaling to stay in range.
            let half = 2f64.powi(k as i32 / 2);
            let rest = 2f64.powi(k as i32 - k as i32 / 2);
            return sum.mul_f(half).mul_f(rest);
        }
        sum.mul_f(scale)
    }

    pub fn ln(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from(if self.hi == 0.0 { f64::NEG_INFINITY } else { f64::NAN });
        }
        if !self.hi.is_finite() {
            return self;
        }
        if (self.hi - 1.0).abs() < 0.125 {
            // ln x = 2 atanh(u), u = (x - 1)/(x + 1), keeps relative accuracy near 1.
            let u = self.sub(Dd::ONE).div(self.add(Dd::ONE));
            let u2 = u.sqr();
            let mut pow = u;
            let mut sum = u;
            for k in 1..40 {
                pow = pow.mul(u2);
                sum = sum.add(pow.div(Dd::from((2 * k + 1) as f64)));
            }
            return sum.mul_f(2.0);
        }
        let mut y = Dd::from(self.hi.ln());
        for _ in 0..2 {
            y = y.add(self.mul(y.neg().exp()).sub(Dd::ONE));
        }
        y
    }

    /// `self^r` for `self > 0` via `exp(r ln self)`.
    pub fn powr(self, r: f64) -> Dd {
        if self.hi == 0.0 {
            return Dd::from(if r > 0.0 { 0.0 } else { f64::INFINITY });
        }
        self.ln().mul_f(r).exp()
    }

    /// Sign of `self - x`.
    pub fn cmp_f64(self, x: f64) -> Ordering {
        if self.hi.is_infinite() || x.is_infinite() {
            return self.hi.partial_cmp(&x).unwrap_or(Ordering::Equal);
        }
        let d = self.sub(Dd::from(x));
        d.hi.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
    }

    pub fn cmp(self, o: Dd) -> Ordering {
        if self.hi.is_infinite() || o.hi.is_infinite() {
            return self.hi.partial_cmp(&o.hi).unwrap_or(Ordering::Equal);
        }
        self.sub(o).hi.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
    }

    pub fn min(self, o: Dd) -> Dd {
        if self.cmp(o) == Ordering::Greater {
            o
        } else {
            self
        }
    }

    pub fn max(self, o: Dd) -> Dd {
        if self.cmp(o) == Ordering::Less {
            o
        } else {
            self
        }
    }

    /// Distance from `x` to `self` in units of the last place at `self`.
    pub fn ulps_from(self, x: f64) -> f64 {
        if self.hi.is_infinite() || x.is_infinite() {
            return if self.hi == x { 0.0 } else { f64::INFINITY };
        }
        let d = self.sub(Dd::from(x));
        let a = self.hi.abs();
        let ulp = if a == 0.0 { f64::from_bits(1) } else { a.next_up() - a };
        (d.hi + d.lo).abs() / ulp
    }
}
