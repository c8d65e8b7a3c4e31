//! Hamiltonian parameters, the kinetic coefficient `A(x)`, and the ladder-operator
//! coefficient `B(x)`.

use crate::expr::{Bindings, Expr, Jet2};
use crate::mapping::CoordinateMap;
use crate::Error;

/// Tolerance on the normalization `w - alpha - beta = 1/k`.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwansonParams {
    pub w: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Commutator constant `[a, a^+] = k`.
    pub k: f64,
}

impl SwansonParams {
    /// Validated constructor; `w - alpha - beta` must equal `1/k`.
    pub fn new(w: f64, alpha: f64, beta: f64, k: f64) -> Result<Self, Error> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidParams(format!("commutator constant k = {k} must be positive")));
        }
        for (name, v) in [("w", w), ("alpha", alpha), ("beta", beta)] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} = {v} is not finite")));
            }
        }
        let gap = w - alpha - beta - 1.0 / k;
        if gap.abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidParams(format!(
                "w - alpha - beta = {} but must equal 1/k = {}",
                w - alpha - beta,
                1.0 / k
            )));
        }
        let p = Self { w, alpha, beta, k };
        omega_tilde(&p)?;
        Ok(p)
    }

    /// `k = 1` with `w` derived from the normalization.
    pub fn from_alpha_beta(alpha: f64, beta: f64) -> Result<Self, Error> {
        Self::new(1.0 + alpha + beta, alpha, beta, 1.0)
    }

    /// Parameters after rescaling the ladder operators to unit commutator.
    pub fn normalized(&self) -> Self {
        Self {
            w: self.k * self.w,
            alpha: self.k * self.alpha,
            beta: self.k * self.beta,
            k: 1.0,
        }
    }

    /// Constant added to every energy by the rescaling to unit commutator.
    pub fn energy_shift(&self) -> f64 {
        0.5 * self.w * (1.0 - self.k)
    }

    /// Exponent `alpha - beta` of the similarity weight, in unit-commutator form.
    pub fn asymmetry(&self) -> f64 {
        let n = self.normalized();
        n.alpha - n.beta
    }

    pub fn wtilde(&self) -> Result<f64, Error> {
        omega_tilde(self)
    }
}

/// `sqrt(1 + 2(alpha+beta) + (alpha-beta)^2) / 2`, evaluated on the unit-commutator
/// parameters.
pub fn omega_tilde(p: &SwansonParams) -> Result<f64, Error> {
    let n = p.normalized();
    let s = n.alpha + n.beta;
    let d = n.alpha - n.beta;
    let radicand = 1.0 + 2.0 * s + d * d;
    if !(radicand > 0.0) {
        return Err(Error::ComplexFrequency { radicand });
    }
    Ok(0.5 * radicand.sqrt())
}

/// Operator ordering of the number term in the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ordering {
    /// `w (a^+ a + 1/2)`.
    #[default]
    Normal,
    /// `w (a a^+ + 1/2)`: the same operator shifted up by `w k`.
    AntiNormal,
}

impl Ordering {
    pub fn energy_offset(self, p: &SwansonParams) -> f64 {
        match self {
            Ordering::Normal => 0.0,
            Ordering::AntiNormal => p.w * p.k,
        }
    }
}

/// The coefficient `A(x)` of `d/dx` in the lowering operator, given either directly or
/// through a position-dependent mass `m(x) = A(x)^-2`.
#[derive(Debug, Clone)]
pub struct KineticCoefficient {
    expr: Expr,
    from_mass: bool,
    bindings: Bindings,
}

impl KineticCoefficient {
    pub fn from_mass(m: Expr, bindings: Bindings) -> Self {
        Self {
            expr: m,
            from_mass: true,
            bindings,
        }
    }

    pub fn direct(a: Expr, bindings: Bindings) -> Self {
        Self {
            expr: a,
            from_mass: false,
            bindings,
        }
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn is_mass(&self) -> bool {
        self.from_mass
    }

    pub fn bindings(&self) -> &Bindings {
        &self.bindings
    }

    /// `1/A = sqrt(m)`, the integrand of the coordinate map. A vanishing mass is
    /// accepted (it means `A` is infinite); a negative one is not.
    pub fn inverse(&self, x: f64) -> Result<f64, Error> {
        let v = self.expr.eval(x, &self.bindings)?;
        if self.from_mass {
            if !(v >= 0.0) {
                return Err(Error::NonPositiveMass { x, value: v });
            }
            Ok(v.sqrt())
        } else {
            if !(v > 0.0) {
                return Err(Error::NonPositiveMass { x, value: v });
            }
            Ok(1.0 / v)
        }
    }

    pub fn value(&self, x: f64) -> Result<f64, Error> {
        Ok(self.jet(x)?.value)
    }

    /// `(A, A', A'')` at `x`.
    pub fn jet(&self, x: f64) -> Result<Jet2, Error> {
        let j = self.expr.jet(x, &self.bindings)?;
        if !(j.value > 0.0) {
            return Err(Error::NonPositiveMass { x, value: j.value });
        }
        if self.from_mass {
            Ok(j.sqrt().recip())
        } else {
            Ok(j)
        }
    }
}

/// How `B(x)` is obtained.
#[derive(Debug, Clone)]
pub enum BCoefficient {
    /// Solution of the constant-commutator condition, `B = k z/2 + A'/2 + c`.
    Derived { constant: f64 },
    /// The opposite sign of the `A'` term, `B = z/2 - A'/2`. Violates the commutator
    /// condition; kept for comparison only.
    FlippedSign,
    Explicit(Expr),
}

impl Default for BCoefficient {
    fn default() -> Self {
        BCoefficient::Derived { constant: 0.0 }
    }
}

#[derive(Debug, Clone)]
pub struct LadderSpec {
    pub a: KineticCoefficient,
    pub b: BCoefficient,
    pub params: SwansonParams,
}

impl LadderSpec {
    pub fn new(a: KineticCoefficient, b: BCoefficient, params: SwansonParams) -> Self {
        Self { a, b, params }
    }

    /// `(B, B')` at `x`. Derived variants need the coordinate map.
    pub fn b_pair(&self, map: &CoordinateMap, x: f64) -> Result<(f64, f64), Error> {
        let k = self.params.k;
        match &self.b {
            BCoefficient::Explicit(e) => {
                let j = e.jet(x, self.a.bindings())?;
                Ok((j.value, j.d1))
            }
            BCoefficient::Derived { constant } => {
                let a = self.a.jet(x)?;
                let z = map.z_at(x)?;
                Ok((0.5 * k * z + 0.5 * a.d1 + constant, 0.5 * k / a.value + 0.5 * a.d2))
            }
            BCoefficient::FlippedSign => {
                let a = self.a.jet(x)?;
                let z = map.z_at(x)?;
                Ok((0.5 * k * z - 0.5 * a.d1, 0.5 * k / a.value - 0.5 * a.d2))
            }
        }
    }

    /// `2AB' - AA''` at `x`.
    pub fn commutator(&self, map: &CoordinateMap, x: f64) -> Result<f64, Error> {
        let a = self.a.jet(x)?;
        let (_, db) = self.b_pair(map, x)?;
        Ok(2.0 * a.value * db - a.value * a.d2)
    }
}

/// `B(x) = z(x)/2 + A'(x)/2`, the zero-constant solution of `2AB' - AA'' = 1`.
pub fn derive_b(a: &KineticCoefficient, map: &CoordinateMap, x: f64) -> Result<f64, Error> {
    Ok(0.5 * map.z_at(x)? + 0.5 * a.jet(x)?.d1)
}

/// Largest `|2AB' - AA'' - k|` over the sample points.
pub fn commutator_residual(spec: &LadderSpec, map: &CoordinateMap, samples: &[f64]) -> Result<f64, Error> {
    let mut worst: f64 = 0.0;
    for &x in samples {
        let c = spec.commutator(map, x)?;
        worst = worst.max((c - spec.params.k).abs());
    }
    Ok(worst)
}
