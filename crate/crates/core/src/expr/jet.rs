//! Second-order forward-mode jets.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value together with its first and second derivative at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }

    pub const fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0)
    }

    /// The independent variable at `x`.
    pub const fn variable(x: f64) -> Self {
        Self::new(x, 1.0, 0.0)
    }

    /// Compose with a scalar function given `f(u)`, `f'(u)`, `f''(u)` at `u = self.value`.
    #[inline]
    pub fn chain(self, f: f64, df: f64, d2f: f64) -> Self {
        Self {
            value: f,
            d1: df * self.d1,
            d2: d2f * self.d1 * self.d1 + df * self.d2,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    pub fn recip(self) -> Self {
        let r = 1.0 / self.value;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    /// Integer power by repeated squaring, so even powers stay exact at zero.
    pub fn powi(self, n: i64) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut result = Jet2::constant(1.0);
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        result
    }

    /// Real power with constant exponent; caller guarantees a positive base.
    pub fn powf(self, p: f64) -> Self {
        let u = self.value;
        let f = u.powf(p);
        self.chain(f, p * f / u, p * (p - 1.0) * f / (u * u))
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        let u = self.value;
        self.chain(u.ln(), 1.0 / u, -1.0 / (u * u))
    }

    pub fn sqrt(self) -> Self {
        let s = self.value.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * s * s))
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn tan(self) -> Self {
        let t = self.value.tan();
        let sec2 = 1.0 + t * t;
        self.chain(t, sec2, 2.0 * t * sec2)
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(s, c, s)
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(c, s, c)
    }

    pub fn tanh(self) -> Self {
        let t = self.value.tanh();
        let sech2 = 1.0 - t * t;
        self.chain(t, sech2, -2.0 * t * sech2)
    }

    pub fn sech(self) -> Self {
        let s = 1.0 / self.value.cosh();
        let t = self.value.tanh();
        self.chain(s, -s * t, s * (t * t - s * s))
    }

    pub fn abs(self) -> Self {
        let sign = if self.value > 0.0 {
            1.0
        } else if self.value < 0.0 {
            -1.0
        } else {
            0.0
        };
        self.chain(self.value.abs(), sign, 0.0)
    }

    pub fn atan(self) -> Self {
        let u = self.value;
        let q = 1.0 / (1.0 + u * u);
        self.chain(u.atan(), q, -2.0 * u * q * q)
    }

    pub fn asinh(self) -> Self {
        let u = self.value;
        let q = 1.0 / (1.0 + u * u).sqrt();
        self.chain(u.asinh(), q, -u * q * q * q)
    }

    pub fn erf(self) -> Self {
        let u = self.value;
        let g = std::f64::consts::FRAC_2_SQRT_PI * (-u * u).exp();
        self.chain(libm::erf(u), g, -2.0 * u * g)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2::new(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2::new(
            self.value * o.value,
            self.d1 * o.value + self.value * o.d1,
            self.d2 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d2,
        )
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.value, -self.d1, -self.d2)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, s: f64) -> Jet2 {
        Jet2::new(self.value * s, self.d1 * s, self.d2 * s)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, s: f64) -> Jet2 {
        Jet2::new(self.value + s, self.d1, self.d2)
    }
}
