//! Kummer's confluent hypergeometric function `1F1(a; b; y)` and related helpers.

use std::f64::consts::PI;

use crate::quadrature::CompensatedSum;
use crate::roots::brent;
use crate::Error;

/// Series terms tried before giving up.
pub const MAX_TERMS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerArgs {
    pub a: f64,
    pub b: f64,
    pub y: f64,
}

fn is_non_positive_integer(v: f64) -> bool {
    v <= 0.0 && v.fract() == 0.0
}

/// `1F1(a; b; y)` by its Taylor series with compensated summation. Terminates exactly
/// when `a` is a non-positive integer.
pub fn hyp1f1(args: KummerArgs) -> Result<f64, Error> {
    let KummerArgs { a, b, y } = args;
    if is_non_positive_integer(b) {
        return Err(Error::InvalidRegime(format!("1F1 is undefined for b = {b}")));
    }
    if !(a.is_finite() && b.is_finite() && y.is_finite()) {
        return Err(Error::InvalidRegime(format!("non-finite argument (a={a}, b={b}, y={y})")));
    }
    let polynomial = is_non_positive_integer(a);
    let mut sum = CompensatedSum::new();
    let mut term = 1.0;
    sum.add(term);
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        if polynomial && a + nf == 0.0 {
            return Ok(sum.value());
        }
        term *= (a + nf) * y / ((b + nf) * (nf + 1.0));
        sum.add(term);
        let s = sum.value();
        let decreasing = ((a + nf + 1.0) * y).abs() < ((b + nf + 1.0) * (nf + 2.0)).abs();
        if decreasing && term.abs() <= 1e-16 * s.abs() {
            return Ok(s);
        }
        if !s.is_finite() {
            break;
        }
    }
    Err(Error::SeriesNonConvergence {
        a,
        b,
        y,
        terms: MAX_TERMS,
    })
}

/// Leading-order estimate `pi^2 (m + b/2 - 3/4)^2 / (2b - 4a)` of the `m`-th positive zero
/// of `1F1(a; b; y)` in `y`. Advisory only: it does not prove the zero exists.
pub fn hyp1f1_zero_guess(m: u32, a: f64, b: f64) -> Result<f64, Error> {
    let denom = 2.0 * b - 4.0 * a;
    if !(denom > 0.0) {
        return Err(Error::InvalidRegime(format!("2b - 4a = {denom} must be positive")));
    }
    let c = m as f64 + 0.5 * b - 0.75;
    Ok(PI * PI * c * c / denom)
}

/// Smallest positive zero of `1F1(a; b; y)` in `y`, scanning `(0, y_max]` for a sign change.
pub fn hyp1f1_first_zero(a: f64, b: f64, y_max: f64) -> Result<f64, Error> {
    let f = |y: f64| hyp1f1(KummerArgs { a, b, y });
    let steps = 4000;
    let h = y_max / steps as f64;
    let mut lo = 0.0;
    let mut flo = f(lo)?;
    for i in 1..=steps {
        let hi = h * i as f64;
        let fhi = f(hi)?;
        if fhi == 0.0 {
            return Ok(hi);
        }
        if flo.signum() != fhi.signum() {
            return brent(f, lo, hi, 1e-15);
        }
        lo = hi;
        flo = fhi;
    }
    Err(Error::RootBracketFailure {
        lo: 0.0,
        hi: y_max,
        detail: format!("1F1({a}; {b}; y) keeps its sign"),
    })
}

/// Physicists' Hermite polynomial by the three-term recurrence.
pub fn hermite(n: u32, t: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * t);
    if n == 0 {
        return h0;
    }
    for k in 1..n {
        let h2 = 2.0 * t * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// `(1F1(-m; 1/2; t^2), (-1)^m m!/(2m)! H_{2m}(t))`; the two agree identically.
pub fn hermite_correspondence(m: u32, t: f64) -> (f64, f64) {
    let series = hyp1f1(KummerArgs {
        a: -(m as f64),
        b: 0.5,
        y: t * t,
    })
    .expect("terminating series");
    let mut scale = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    for k in (m + 1)..=(2 * m) {
        scale /= k as f64;
    }
    (series, scale * hermite(2 * m, t))
}
