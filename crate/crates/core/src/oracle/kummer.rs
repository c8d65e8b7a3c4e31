//! Double-double evaluation of `1F1`, used to check the Kummer transformation
//! `1F1(a; b; y) = e^y 1F1(b - a; b; -y)` independently of the main series.

use std::ops::{Add, Div, Mul};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl DoubleDouble {
    pub fn new(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            Self {
                hi: -self.hi,
                lo: -self.lo,
            }
        } else {
            self
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl Mul<f64> for DoubleDouble {
    type Output = Self;
    fn mul(self, b: f64) -> Self {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Self { hi, lo }
    }
}

impl Div<f64> for DoubleDouble {
    type Output = Self;
    fn div(self, b: f64) -> Self {
        self / DoubleDouble::new(b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p) + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self + o * -q1;
        let q2 = r.hi / o.hi;
        let r = r + o * -q2;
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + DoubleDouble::new(q3)
    }
}

/// `1F1(a; b; y)` summed in double-double arithmetic, including the Pochhammer factors.
pub fn hyp1f1_dd(a: DoubleDouble, b: DoubleDouble, y: f64) -> f64 {
    let mut term = DoubleDouble::new(1.0);
    let mut sum = term;
    for n in 0..10_000 {
        let nf = DoubleDouble::new(n as f64);
        let an = a + nf;
        if an.hi == 0.0 && an.lo == 0.0 {
            break;
        }
        term = term * an * y / (b + nf) / (n as f64 + 1.0);
        sum = sum + term;
        let decreasing = ((an.hi + 1.0) * y).abs() < ((b.hi + n as f64 + 1.0) * (n as f64 + 2.0)).abs();
        if decreasing && term.abs().hi <= 1e-33 * sum.abs().hi {
            break;
        }
    }
    sum.to_f64()
}

/// Right-hand side of the Kummer transformation, `e^y 1F1(b - a; b; -y)`, with `b - a`
/// formed exactly.
pub fn kummer_transformed(a: f64, b: f64, y: f64) -> f64 {
    let c = DoubleDouble::new(b) + DoubleDouble::new(-a);
    y.exp() * hyp1f1_dd(c, DoubleDouble::new(b), -y)
}
