//! Effective potential of the Hermitian equivalent, in the general `(A, B)` form and in
//! the reduced Liouville form.

use std::io::Write;

use crate::mapping::CoordinateMap;
use crate::model::{omega_tilde, KineticCoefficient, LadderSpec, SwansonParams};
use crate::report::fmt_g;
use crate::Error;

fn require_unit_commutator(p: &SwansonParams) -> Result<(), Error> {
    if p.k != 1.0 {
        return Err(Error::InvalidParams(format!(
            "effective potentials are defined for k = 1 only (got k = {})",
            p.k
        )));
    }
    Ok(())
}

/// Effective potential from `A, A', A'', B, B'` directly.
pub fn v_eff_general(spec: &LadderSpec, map: &CoordinateMap, x: f64) -> Result<f64, Error> {
    let p = &spec.params;
    require_unit_commutator(p)?;
    let wt = omega_tilde(p)?;
    let a = spec.a.jet(x)?;
    let (b, db) = spec.b_pair(map, x)?;
    let s = p.alpha + p.beta;
    let d = p.alpha - p.beta;
    let w2 = wt * wt;
    Ok(0.5 * s * a.value * a.d2 + (0.5 * s + 0.25 * d * d) * a.d1 * a.d1 - 4.0 * w2 * a.d1 * b + 4.0 * w2 * b * b
        - (s + 1.0) * a.value * db
        + 0.5 * (s + 1.0))
}

/// `-A A''/2 - A'^2/4 + wtilde^2 z^2`.
pub fn v_eff_reduced(a: &KineticCoefficient, p: &SwansonParams, x: f64, z: f64) -> Result<f64, Error> {
    require_unit_commutator(p)?;
    let wt = omega_tilde(p)?;
    Ok(curvature_term(a, x)? + wt * wt * z * z)
}

/// The `z`-independent part `-A A''/2 - A'^2/4`.
pub fn curvature_term(a: &KineticCoefficient, x: f64) -> Result<f64, Error> {
    let j = a.jet(x)?;
    Ok(-0.5 * j.value * j.d2 - 0.25 * j.d1 * j.d1)
}

/// Largest disagreement between the two forms over `samples`, measured as
/// `|general - reduced| / max(1, |reduced|)` so that rapidly growing potentials are
/// compared by their leading digits.
pub fn consistency_report(spec: &LadderSpec, map: &CoordinateMap, samples: &[f64]) -> Result<f64, Error> {
    let mut worst: f64 = 0.0;
    for &x in samples {
        let g = v_eff_general(spec, map, x)?;
        let r = v_eff_reduced(&spec.a, &spec.params, x, map.z_at(x)?)?;
        worst = worst.max((g - r).abs() / r.abs().max(1.0));
    }
    Ok(worst)
}

/// `(x, z, V_eff)` samples.
#[derive(Debug, Clone)]
pub struct PotentialGrid {
    pub params: SwansonParams,
    pub rows: Vec<(f64, f64, f64)>,
}

impl PotentialGrid {
    pub fn tabulate(a: &KineticCoefficient, map: &CoordinateMap, p: &SwansonParams, xs: &[f64]) -> Result<Self, Error> {
        let mut rows = Vec::with_capacity(xs.len());
        for &x in xs {
            let z = map.z_at(x)?;
            rows.push((x, z, v_eff_reduced(a, p, x, z)?));
        }
        Ok(Self { params: *p, rows })
    }

    /// Tabulate on the map's own nodes with `|x - x0| <= half_width`.
    pub fn on_nodes(a: &KineticCoefficient, map: &CoordinateMap, p: &SwansonParams, half_width: f64) -> Result<Self, Error> {
        let x0 = map.anchor();
        let xs: Vec<f64> = map.nodes().map(|(x, _)| x).filter(|x| (x - x0).abs() <= half_width).collect();
        Self::tabulate(a, map, p, &xs)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), Error> {
        writeln!(out, "x,z,v_eff")?;
        for &(x, z, v) in &self.rows {
            writeln!(out, "{},{},{}", fmt_g(x), fmt_g(z), fmt_g(v))?;
        }
        Ok(())
    }
}
