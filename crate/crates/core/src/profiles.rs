//! Built-in mass profiles with closed-form coordinate maps and potentials.

use std::f64::consts::PI;

use crate::expr::{parse, Bindings, Expr};
use crate::mapping::{build_map_with_offset, CoordinateMap, DomainClass};
use crate::model::KineticCoefficient;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralLaw {
    /// Evenly spaced oscillator levels.
    Ladder,
    /// Dirichlet box in `z`, solved through the parity conditions.
    BoxExact,
    /// Half-line image: only the numerical oracle reports a spectrum.
    Deferred,
}

impl SpectralLaw {
    pub fn name(self) -> &'static str {
        match self {
            SpectralLaw::Ladder => "Ladder",
            SpectralLaw::BoxExact => "BoxExact",
            SpectralLaw::Deferred => "Deferred",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProfileEntry {
    pub name: &'static str,
    /// Which of the two reference tables the profile belongs to (1: isospectral, 2: not).
    pub table: u8,
    pub mass: &'static str,
    /// Closed-form coordinate map.
    pub z_closed: &'static str,
    /// Closed-form potential without the `wt^2 z^2` term.
    pub v_closed: &'static str,
    /// Value of the closed-form map at the anchor `x = 0`.
    pub z_at_anchor: f64,
    pub domain: DomainClass,
    pub law: SpectralLaw,
    /// Parameter names and defaults.
    pub parameters: &'static [(&'static str, f64)],
}

const NO_PARAMS: &[(&str, f64)] = &[];
const GAMMA: &[(&str, f64)] = &[("gamma", 2.0)];

/// The eight built-in profiles.
pub fn catalog() -> Vec<ProfileEntry> {
    let half_pi = PI / 2.0;
    let half_sqrt_pi = PI.sqrt() / 2.0;
    vec![
        ProfileEntry {
            name: "nonlinear-osc",
            table: 1,
            mass: "1/(1+x^2)",
            z_closed: "asinh(x)",
            v_closed: "-(2+x^2)/(4*(1+x^2))",
            z_at_anchor: 0.0,
            domain: DomainClass::UnboundedLine,
            law: SpectralLaw::Ladder,
            parameters: NO_PARAMS,
        },
        ProfileEntry {
            name: "cosh2",
            table: 1,
            mass: "cosh(x)^2",
            z_closed: "sinh(x)",
            v_closed: "(7-3*cosh(2*x))*sech(x)^4/8",
            z_at_anchor: 0.0,
            domain: DomainClass::UnboundedLine,
            law: SpectralLaw::Ladder,
            parameters: NO_PARAMS,
        },
        ProfileEntry {
            name: "gamma-rational",
            table: 1,
            mass: "((gamma+x^2)/(1+x^2))^2",
            z_closed: "x+(gamma-1)*atan(x)",
            v_closed: "(gamma-1)*(3*x^4-2*(gamma-2)*x^2-gamma)/(x^2+gamma)^4",
            z_at_anchor: 0.0,
            domain: DomainClass::UnboundedLine,
            law: SpectralLaw::Ladder,
            parameters: GAMMA,
        },
        ProfileEntry {
            name: "exp-sech2",
            table: 1,
            // exp(2x) sech(x)^2, written so it does not overflow for large x
            mass: "4/(1+exp(-2*x))^2",
            z_closed: "log(1+exp(2*x))",
            v_closed: "-3/4*exp(-4*x)-1/2*exp(-2*x)",
            z_at_anchor: std::f64::consts::LN_2,
            domain: DomainClass::SemiBoundedBelow { zminus: 0.0 },
            law: SpectralLaw::Deferred,
            parameters: NO_PARAMS,
        },
        ProfileEntry {
            name: "exp-mass",
            table: 1,
            mass: "exp(-x)",
            z_closed: "-2*exp(-x/2)",
            v_closed: "-3/16*exp(x)",
            z_at_anchor: -2.0,
            domain: DomainClass::SemiBoundedAbove { zplus: 0.0 },
            law: SpectralLaw::Deferred,
            parameters: NO_PARAMS,
        },
        ProfileEntry {
            name: "sech2",
            table: 2,
            mass: "sech(x)^2",
            z_closed: "atan(sinh(x))",
            v_closed: "1/4-3/4*cosh(x)^2",
            z_at_anchor: 0.0,
            domain: DomainClass::BoundedInterval {
                zminus: -half_pi,
                zplus: half_pi,
            },
            law: SpectralLaw::BoxExact,
            parameters: NO_PARAMS,
        },
        ProfileEntry {
            name: "gauss",
            table: 2,
            mass: "exp(-2*x^2)",
            z_closed: "sqrt(pi)/2*erf(x)",
            v_closed: "-(1+3*x^2)*exp(2*x^2)",
            z_at_anchor: 0.0,
            domain: DomainClass::BoundedInterval {
                zminus: -half_sqrt_pi,
                zplus: half_sqrt_pi,
            },
            law: SpectralLaw::BoxExact,
            parameters: NO_PARAMS,
        },
        ProfileEntry {
            name: "lorentzian2",
            table: 2,
            mass: "1/(1+x^2)^2",
            z_closed: "atan(x)",
            v_closed: "-(1+2*x^2)",
            z_at_anchor: 0.0,
            domain: DomainClass::BoundedInterval {
                zminus: -half_pi,
                zplus: half_pi,
            },
            law: SpectralLaw::BoxExact,
            parameters: NO_PARAMS,
        },
    ]
}

/// Look up a profile by name.
pub fn find(name: &str) -> Option<ProfileEntry> {
    catalog().into_iter().find(|p| p.name == name)
}

impl ProfileEntry {
    pub fn parameter_names(&self) -> Vec<&'static str> {
        self.parameters.iter().map(|(n, _)| *n).collect()
    }

    /// Defaults overridden by `overrides` (unknown names are ignored).
    pub fn bindings(&self, overrides: &Bindings) -> Bindings {
        self.parameters
            .iter()
            .map(|(n, v)| (n.to_string(), overrides.get(*n).copied().unwrap_or(*v)))
            .collect()
    }

    fn parse(&self, text: &str) -> Expr {
        parse(text, &self.parameter_names()).expect("catalog formulas parse")
    }

    pub fn mass_expr(&self) -> Expr {
        self.parse(self.mass)
    }

    pub fn z_expr(&self) -> Expr {
        self.parse(self.z_closed)
    }

    pub fn v_expr(&self) -> Expr {
        self.parse(self.v_closed)
    }

    pub fn coefficient(&self, overrides: &Bindings) -> KineticCoefficient {
        KineticCoefficient::from_mass(self.mass_expr(), self.bindings(overrides))
    }

    /// Coordinate map anchored at `x = 0` with the closed form's value there.
    pub fn build_map(&self, overrides: &Bindings, tol: f64) -> Result<CoordinateMap, Error> {
        build_map_with_offset(&self.coefficient(overrides), 0.0, self.z_at_anchor, tol)
    }

    /// Box-law estimate for bounded images, `pi^2 n^2 / (4 zplus^2)`, as a label.
    pub fn approx_law(&self) -> Option<String> {
        match self.domain {
            DomainClass::BoundedInterval { zplus, .. } => {
                let c = PI * PI / (4.0 * zplus * zplus);
                if (c - 1.0).abs() < 1e-12 {
                    Some("n^2".into())
                } else if (c - PI).abs() < 1e-12 {
                    Some("pi n^2".into())
                } else {
                    Some(format!("{c} n^2"))
                }
            }
            _ => None,
        }
    }
}
