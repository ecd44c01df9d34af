//! Directed rounding of scalar operations.
//!
//! Results are computed in round-to-nearest and then corrected with
//! error-free transformations, so `*_down` never exceeds and `*_up` is never
//! below the exact real result. Near the subnormal range the exact error term
//! may not be representable; there the result is simply nudged one ulp.

/// Below this magnitude error-free transformations may underflow.
const TINY: f64 = 1.0e-290;

#[inline]
fn overflow_down(s: f64) -> f64 {
    if s > 0.0 {
        f64::MAX
    } else {
        f64::NEG_INFINITY
    }
}

#[inline]
fn overflow_up(s: f64) -> f64 {
    if s < 0.0 {
        -f64::MAX
    } else {
        f64::INFINITY
    }
}

/// Rounding error of `a + b` relative to `s = fl(a + b)` (TwoSum).
#[inline]
fn sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

pub fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_nan() {
        return f64::NEG_INFINITY;
    }
    if s.is_infinite() {
        return if a.is_infinite() || b.is_infinite() { s } else { overflow_down(s) };
    }
    if sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

pub fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_nan() {
        return f64::INFINITY;
    }
    if s.is_infinite() {
        return if a.is_infinite() || b.is_infinite() { s } else { overflow_up(s) };
    }
    if sum_err(a, b, s) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

pub fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if p.is_nan() {
        return f64::NEG_INFINITY;
    }
    if p.is_infinite() {
        return if a.is_infinite() || b.is_infinite() { p } else { overflow_down(p) };
    }
    if p.abs() < TINY {
        return p.next_down();
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

pub fn mul_up(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if p.is_nan() {
        return f64::INFINITY;
    }
    if p.is_infinite() {
        return if a.is_infinite() || b.is_infinite() { p } else { overflow_up(p) };
    }
    if p.abs() < TINY {
        return p.next_up();
    }
    if a.mul_add(b, -p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// Sign of `a / b - fl(a / b)`: negative, zero or positive.
/// `None` when the remainder cannot be trusted.
#[inline]
fn quot_err_sign(a: f64, b: f64, q: f64) -> Option<f64> {
    if q.abs() < TINY || a.abs() < TINY || !b.is_finite() {
        return None;
    }
    let r = (-q).mul_add(b, a);
    Some(if b > 0.0 { r } else { -r })
}

pub fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 && b != 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q.is_nan() {
        return f64::NEG_INFINITY;
    }
    if a.is_infinite() || b.is_infinite() || b == 0.0 {
        return q;
    }
    if q.is_infinite() {
        return overflow_down(q);
    }
    match quot_err_sign(a, b, q) {
        Some(e) if e >= 0.0 => q,
        _ => q.next_down(),
    }
}

pub fn div_up(a: f64, b: f64) -> f64 {
    if a == 0.0 && b != 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q.is_nan() {
        return f64::INFINITY;
    }
    if a.is_infinite() || b.is_infinite() || b == 0.0 {
        return q;
    }
    if q.is_infinite() {
        return overflow_up(q);
    }
    match quot_err_sign(a, b, q) {
        Some(e) if e <= 0.0 => q,
        _ => q.next_up(),
    }
}

/// Lower bound of `sqrt(a)` for `a >= 0`.
pub fn sqrt_down(a: f64) -> f64 {
    if a <= 0.0 {
        return 0.0;
    }
    let s = a.sqrt();
    if a.is_infinite() {
        return s;
    }
    if a < TINY {
        return s.next_down().max(0.0);
    }
    if (-s).mul_add(s, a) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

/// Upper bound of `sqrt(a)` for `a >= 0`.
pub fn sqrt_up(a: f64) -> f64 {
    if a <= 0.0 {
        return 0.0;
    }
    let s = a.sqrt();
    if a.is_infinite() {
        return s;
    }
    if a < TINY {
        return s.next_up();
    }
    if (-s).mul_add(s, a) > 0.0 {
        s.next_up()
    } else {
        s
    }
}

/// Rounds `v = hi + lo + e`, `|e| <= err`, to a float on the requested side
/// of `v`, at most one step beyond the nearest one.
fn round_dd(hi: f64, lo: f64, err: f64, up: bool) -> f64 {
    if up {
        let r = hi.next_up();
        if lo <= -err {
            hi
        } else if (r - hi) - lo >= 2.0 * err {
            r
        } else {
            r.next_up()
        }
    } else {
        let r = hi.next_down();
        if lo >= err {
            hi
        } else if (hi - r) + lo >= 2.0 * err {
            r
        } else {
            r.next_down()
        }
    }
}

/// `a^n` rounded down, for `a >= 0`.
pub fn powi_down(a: f64, n: u32) -> f64 {
    match pow_dd(a, n) {
        Some((hi, lo, err)) => round_dd(hi, lo, err, false),
        None => pow_chain(a, n, mul_down),
    }
}

/// `a^n` rounded up, for `a >= 0`.
pub fn powi_up(a: f64, n: u32) -> f64 {
    match pow_dd(a, n) {
        Some((hi, lo, err)) => round_dd(hi, lo, err, true),
        None => pow_chain(a, n, mul_up),
    }
}

/// `a^-n` rounded down, for `a > 0`.
pub fn recip_powi_down(a: f64, n: u32) -> f64 {
    match recip_dd(a, n) {
        Some((hi, lo, err)) => round_dd(hi, lo, err, false),
        None => div_down(1.0, powi_up(a, n)),
    }
}

/// `a^-n` rounded up, for `a > 0`.
pub fn recip_powi_up(a: f64, n: u32) -> f64 {
    match recip_dd(a, n) {
        Some((hi, lo, err)) => round_dd(hi, lo, err, true),
        None => div_up(1.0, powi_down(a, n)),
    }
}

fn recip_dd(a: f64, n: u32) -> Option<(f64, f64, f64)> {
    let (hi, lo, err) = pow_dd(a, n)?;
    if hi == 0.0 {
        return None;
    }
    let q = 1.0 / hi;
    if !(TINY..1.0e300).contains(&q.abs()) {
        return None;
    }
    // 1/v = q / (1 - rho) with rho = 1 - q*v of order 2^-53.
    let rho = (-q).mul_add(hi, 1.0) - q * lo;
    let c = q * rho;
    let e = q.abs() * (2f64.powi(-100) + 4.0 * err / hi.abs());
    if rho == 0.0 && err == 0.0 && lo == 0.0 {
        return Some((q, 0.0, 0.0));
    }
    Some((q, c, e))
}

/// `a^n` as an unevaluated sum `hi + lo` with an error bound, computed in
/// double-double. `None` when intermediate values leave the range where the
/// error-free products are exact. An exact result has `lo == err == 0`.
fn pow_dd(a: f64, mut n: u32) -> Option<(f64, f64, f64)> {
    let mut exact = true;
    let mut mul = |(ah, al): (f64, f64), (bh, bl): (f64, f64)| -> Option<(f64, f64)> {
        let p = ah * bh;
        if !(p.is_finite() && (p == 0.0 || (TINY..1.0e300).contains(&p.abs()))) {
            return None;
        }
        let e = ah.mul_add(bh, -p);
        let cross = ah * bl + al * bh;
        if e != 0.0 || cross != 0.0 || al != 0.0 || bl != 0.0 {
            exact = false;
        }
        let t = e + cross;
        let hi = p + t;
        Some((hi, t - (hi - p)))
    };
    let steps = 2 * (32 - n.leading_zeros()) as i32;
    let mut acc = (1.0, 0.0);
    let mut base = (a, 0.0);
    while n > 0 {
        if n & 1 == 1 {
            acc = mul(acc, base)?;
        }
        n >>= 1;
        if n > 0 {
            base = mul(base, base)?;
        }
    }
    if exact {
        return Some((acc.0, 0.0, 0.0));
    }
    // Each double-double product is good to a few units of 2^-104.
    let err = acc.0.abs() * f64::from(steps.max(1)) * 2f64.powi(-98);
    Some((acc.0, acc.1, err))
}

fn pow_chain(a: f64, mut n: u32, mul: fn(f64, f64) -> f64) -> f64 {
    // Square-and-multiply; on non-negative operands each directed product is
    // monotone, so the bound stays on the requested side.
    let mut acc = 1.0;
    let mut base = a;
    while n > 0 {
        if n & 1 == 1 {
            acc = mul(acc, base);
        }
        n >>= 1;
        if n > 0 {
            base = mul(base, base);
        }
    }
    acc
}

pub fn exp_down(a: f64) -> f64 {
    if a == 0.0 {
        return 1.0;
    }
    if a == f64::NEG_INFINITY {
        return 0.0;
    }
    let e = a.exp();
    if e.is_infinite() {
        return if a.is_infinite() { e } else { f64::MAX };
    }
    e.next_down().max(0.0)
}

pub fn exp_up(a: f64) -> f64 {
    if a == 0.0 {
        return 1.0;
    }
    if a.is_infinite() {
        return a.exp();
    }
    let e = a.exp();
    if e.is_infinite() {
        return e;
    }
    e.next_up()
}

/// Lower bound of `ln(a)` for `a >= 0`.
pub fn ln_down(a: f64) -> f64 {
    if a <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if a == 1.0 {
        return 0.0;
    }
    if a.is_infinite() {
        return f64::MAX;
    }
    a.ln().next_down()
}

/// Upper bound of `ln(a)` for `a >= 0`.
pub fn ln_up(a: f64) -> f64 {
    if a <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if a == 1.0 {
        return 0.0;
    }
    if a.is_infinite() {
        return a;
    }
    a.ln().next_up()
}

/// Lower bound of `a^r` for `a >= 0` and non-integer `r`.
pub fn powr_down(a: f64, r: f64) -> f64 {
    if a == 1.0 {
        return 1.0;
    }
    let p = a.powf(r);
    if a == 0.0 || a.is_infinite() || p == 0.0 {
        return p;
    }
    if p.is_infinite() {
        return f64::MAX;
    }
    p.next_down().max(0.0)
}

/// Upper bound of `a^r` for `a >= 0` and non-integer `r`.
pub fn powr_up(a: f64, r: f64) -> f64 {
    if a == 1.0 {
        return 1.0;
    }
    let p = a.powf(r);
    if a == 0.0 || a.is_infinite() || p.is_infinite() {
        return p;
    }
    p.next_up()
}
