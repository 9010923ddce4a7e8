//! Minimal double-double arithmetic (an unevaluated sum `hi + lo` with
//! `|lo| ≤ ulp(hi)/2`), used where a recurrence must keep more than 53 bits.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd {
        hi: s,
        lo: (a - (s - bb)) + (b - bb),
    }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// `a / b` to double-double accuracy.
    pub fn ratio(a: f64, b: f64) -> Self {
        let q = a / b;
        // exact remainder a − q·b
        let p = q * b;
        let p_err = q.mul_add(b, -p);
        let r = ((a - p) - p_err) / b;
        quick_two_sum(q, r)
    }

    pub fn scale(self, s: f64) -> Self {
        self * Dd::new(s)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let u = quick_two_sum(s.hi, s.lo + t.hi);
        quick_two_sum(u.hi, u.lo + t.lo)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_third_keeps_extra_bits() {
        let third = Dd::ratio(1.0, 3.0);
        let back = third * Dd::new(3.0) - Dd::new(1.0);
        assert!(back.to_f64().abs() < 1e-31);
        assert!(third.lo != 0.0);
    }

    #[test]
    fn cancellation_is_exact_beyond_f64() {
        let a = Dd::new(1.0) + Dd::new(1e-20);
        let d = a - Dd::new(1.0);
        assert!((d.to_f64() - 1e-20).abs() < 1e-35);
    }
}
