//! Analytic spectra (ladder and box), eigenfunctions in `z` and `x`, and the
//! similarity weight that carries them back to the non-Hermitian Hamiltonian.

use std::f64::consts::PI;
use std::io::Write;

use serde_json::{json, Value};

use crate::mapping::{CoordinateMap, DomainClass};
use crate::model::{omega_tilde, LadderSpec, SwansonParams};
use crate::quadrature::integrate;
use crate::report::{fmt_g, num};
use crate::roots::brent;
use crate::specfun::{hyp1f1, KummerArgs};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Ladder,
    BoxExact,
    BoxApprox,
    OracleZ,
    OracleX,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Ladder => "Ladder",
            Method::BoxExact => "BoxExact",
            Method::BoxApprox => "BoxApprox",
            Method::OracleZ => "OracleZ",
            Method::OracleX => "OracleX",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    /// Parity of the `i`-th level counted from zero on a symmetric domain.
    pub fn of_rank(i: usize) -> Parity {
        if i.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Level {
    pub n: usize,
    pub energy: f64,
    pub parity: Option<Parity>,
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub method: Method,
    pub levels: Vec<Level>,
    pub params: SwansonParams,
    pub domain: DomainClass,
    /// Non-fatal diagnostics (for example truncation effects in the oracle).
    pub warnings: Vec<String>,
}

impl SpectrumResult {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn levels_json(&self) -> Value {
        Value::Array(
            self.levels
                .iter()
                .map(|l| {
                    json!({
                        "n": l.n,
                        "E": num(l.energy),
                        "parity": l.parity.map_or(Value::Null, |p| Value::String(p.name().into())),
                    })
                })
                .collect(),
        )
    }

    fn check_increasing(&self) -> Result<(), Error> {
        for w in self.levels.windows(2) {
            if !(w[1].energy > w[0].energy) {
                return Err(Error::ParityOrderViolation(format!(
                    "E_{} = {} is not above E_{} = {}",
                    w[1].n, w[1].energy, w[0].n, w[0].energy
                )));
            }
        }
        Ok(())
    }
}

/// `E_n = 2 wtilde (n + 1/2)` for `n = 0..=n_max`; only valid on the whole line.
pub fn ladder_spectrum(p: &SwansonParams, domain: DomainClass, n_max: usize) -> Result<SpectrumResult, Error> {
    if domain != DomainClass::UnboundedLine {
        return Err(Error::DomainMismatch(format!(
            "the ladder spectrum needs an unbounded z-line, but the domain is {}",
            domain.name()
        )));
    }
    let wt = omega_tilde(p)?;
    let shift = p.energy_shift();
    let levels = (0..=n_max)
        .map(|n| Level {
            n,
            energy: 2.0 * wt * (n as f64 + 0.5) + shift,
            parity: Some(Parity::of_rank(n)),
        })
        .collect();
    Ok(SpectrumResult {
        method: Method::Ladder,
        levels,
        params: *p,
        domain,
        warnings: Vec::new(),
    })
}

/// Box-law approximation `pi^2 n^2 / (4 zplus^2)`, `n = 1..=n_max`.
pub fn box_spectrum_approx(p: &SwansonParams, zplus: f64, n_max: usize) -> SpectrumResult {
    let levels = (1..=n_max)
        .map(|n| Level {
            n,
            energy: box_level(n, zplus) + p.energy_shift(),
            parity: Some(Parity::of_rank(n - 1)),
        })
        .collect();
    SpectrumResult {
        method: Method::BoxApprox,
        levels,
        params: *p,
        domain: DomainClass::BoundedInterval { zminus: -zplus, zplus },
        warnings: Vec::new(),
    }
}

pub fn box_level(n: usize, zplus: f64) -> f64 {
    let n = n as f64;
    PI * PI * n * n / (4.0 * zplus * zplus)
}

fn kummer_a(parity: Parity, e: f64, wt: f64) -> (f64, f64) {
    match parity {
        Parity::Even => (0.25 - e / (4.0 * wt), 0.5),
        Parity::Odd => (0.75 - e / (4.0 * wt), 1.5),
    }
}

/// Parity solution of `-phi'' + wt^2 z^2 phi = E phi` regular at the origin, without the
/// Gaussian factor.
fn parity_solution(parity: Parity, e: f64, wt: f64, z: f64) -> Result<f64, Error> {
    let (a, b) = kummer_a(parity, e, wt);
    let m = hyp1f1(KummerArgs { a, b, y: wt * z * z })?;
    Ok(match parity {
        Parity::Even => m,
        Parity::Odd => z * m,
    })
}

/// `phi(z)` including the Gaussian factor, unnormalized.
pub fn parity_function(parity: Parity, e: f64, wt: f64, z: f64) -> Result<f64, Error> {
    Ok((-0.5 * wt * z * z).exp() * parity_solution(parity, e, wt, z)?)
}

/// First `count` sign changes of `f` on `[lo, hi]`, each refined by Brent's method.
fn scan_roots<F>(mut f: F, lo: f64, hi: f64, step: f64, count: usize) -> Result<Vec<f64>, Error>
where
    F: FnMut(f64) -> Result<f64, Error>,
{
    let mut roots = Vec::with_capacity(count);
    let mut a = lo;
    let mut fa = f(a)?;
    while roots.len() < count && a < hi {
        let b = (a + step).min(hi);
        let fb = f(b)?;
        if fb == 0.0 {
            roots.push(b);
        } else if fa != 0.0 && fa.signum() != fb.signum() {
            roots.push(brent(&mut f, a, b, 1e-13)?);
        }
        a = b;
        fa = fb;
    }
    if roots.len() < count {
        return Err(Error::RootBracketFailure {
            lo,
            hi,
            detail: format!("found {} of {} eigenvalues", roots.len(), count),
        });
    }
    Ok(roots)
}

fn scan_step(wt: f64, half_width: f64) -> f64 {
    0.02 * (2.0 * PI * PI / (half_width * half_width)).min(4.0 * wt)
}

/// Eigenvalues on the symmetric interval `(-zplus, zplus)` with Dirichlet ends, from the
/// zeros in `E` of the parity solutions at `zplus`. `n` starts at 1; odd `n` are even states.
pub fn box_spectrum_exact(p: &SwansonParams, zplus: f64, n_max: usize) -> Result<SpectrumResult, Error> {
    if !(zplus > 0.0 && zplus.is_finite()) {
        return Err(Error::DomainMismatch(format!("box half-width {zplus} must be positive and finite")));
    }
    let wt = omega_tilde(p)?;
    let shift = p.energy_shift();
    let top = box_level(n_max, zplus) + wt * wt * zplus * zplus + 2.0;
    let step = scan_step(wt, zplus);
    let n_even = n_max.div_ceil(2);
    let n_odd = n_max / 2;
    let even = scan_roots(|e| parity_solution(Parity::Even, e, wt, zplus), 0.0, top, step, n_even)?;
    let odd = scan_roots(|e| parity_solution(Parity::Odd, e, wt, zplus), 0.0, top, step, n_odd)?;
    let levels = (1..=n_max)
        .map(|n| {
            let parity = Parity::of_rank(n - 1);
            let e = match parity {
                Parity::Even => even[(n - 1) / 2],
                Parity::Odd => odd[n / 2 - 1],
            };
            Level {
                n,
                energy: e + shift,
                parity: Some(parity),
            }
        })
        .collect();
    let result = SpectrumResult {
        method: Method::BoxExact,
        levels,
        params: *p,
        domain: DomainClass::BoundedInterval { zminus: -zplus, zplus },
        warnings: Vec::new(),
    };
    result.check_increasing()?;
    Ok(result)
}

/// Eigenvalues on a general interval `(zminus, zplus)` from the zeros of the boundary
/// determinant `phi_e(z-) phi_o(z+) - phi_o(z-) phi_e(z+)`. Levels carry no parity.
pub fn box_spectrum_interval(p: &SwansonParams, zminus: f64, zplus: f64, n_max: usize) -> Result<SpectrumResult, Error> {
    if !(zminus < zplus && zminus.is_finite() && zplus.is_finite()) {
        return Err(Error::DomainMismatch(format!("({zminus}, {zplus}) is not a bounded interval")));
    }
    let wt = omega_tilde(p)?;
    let half = 0.5 * (zplus - zminus);
    let reach = zminus.abs().max(zplus.abs());
    let det = |e: f64| -> Result<f64, Error> {
        Ok(parity_solution(Parity::Even, e, wt, zminus)? * parity_solution(Parity::Odd, e, wt, zplus)?
            - parity_solution(Parity::Odd, e, wt, zminus)? * parity_solution(Parity::Even, e, wt, zplus)?)
    };
    let top = box_level(n_max, half) + wt * wt * reach * reach + 2.0;
    let roots = scan_roots(det, 0.0, top, 0.5 * scan_step(wt, half), n_max)?;
    let levels = roots
        .into_iter()
        .enumerate()
        .map(|(i, e)| Level {
            n: i + 1,
            energy: e + p.energy_shift(),
            parity: None,
        })
        .collect();
    let result = SpectrumResult {
        method: Method::BoxExact,
        levels,
        params: *p,
        domain: DomainClass::BoundedInterval { zminus, zplus },
        warnings: Vec::new(),
    };
    result.check_increasing()?;
    Ok(result)
}

/// Trapezoid rule on a (possibly non-uniform) grid.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2).zip(ys.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum()
}

/// `phi` on `z_grid`, normalized to unit `L^2(dz)` by the trapezoid rule.
pub fn eigenfunction_z(p: &SwansonParams, energy: f64, parity: Parity, z_grid: &[f64]) -> Result<Vec<f64>, Error> {
    let wt = omega_tilde(p)?;
    let e = energy - p.energy_shift();
    let mut phi = z_grid
        .iter()
        .map(|&z| parity_function(parity, e, wt, z))
        .collect::<Result<Vec<_>, _>>()?;
    let sq: Vec<f64> = phi.iter().map(|v| v * v).collect();
    let norm = trapezoid(z_grid, &sq).sqrt();
    if norm > 0.0 {
        phi.iter_mut().for_each(|v| *v /= norm);
    }
    Ok(phi)
}

/// Similarity weight `A^(d/2) exp(-d ∫_{x0}^x B/A)` with `d = alpha - beta`.
pub fn rho_weight(spec: &LadderSpec, map: &CoordinateMap, x: f64) -> Result<f64, Error> {
    let d = spec.params.asymmetry();
    if d == 0.0 {
        return Ok(1.0);
    }
    let x0 = map.anchor();
    let integral = integrate(|t| Ok(spec.b_pair(map, t)?.0 / spec.a.value(t)?), x0, x, 1e-12)?;
    Ok(spec.a.value(x)?.powf(0.5 * d) * (-d * integral).exp())
}

/// `rho` on an increasing grid by cumulative quadrature from the anchor.
pub fn rho_on_grid(spec: &LadderSpec, map: &CoordinateMap, xs: &[f64]) -> Result<Vec<f64>, Error> {
    let d = spec.params.asymmetry();
    if d == 0.0 {
        return Ok(vec![1.0; xs.len()]);
    }
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    let f = |t: f64| -> Result<f64, Error> { Ok(spec.b_pair(map, t)?.0 / spec.a.value(t)?) };
    let x0 = map.anchor();
    let start = xs.partition_point(|&x| x < x0).min(xs.len() - 1);
    let mut log_int = vec![0.0; xs.len()];
    log_int[start] = integrate(f, x0, xs[start], 1e-12)?;
    for i in start + 1..xs.len() {
        log_int[i] = log_int[i - 1] + integrate(f, xs[i - 1], xs[i], 1e-12)?;
    }
    for i in (0..start).rev() {
        log_int[i] = log_int[i + 1] + integrate(f, xs[i + 1], xs[i], 1e-12)?;
    }
    xs.iter()
        .zip(&log_int)
        .map(|(&x, &s)| Ok(spec.a.value(x)?.powf(0.5 * d) * (-d * s).exp()))
        .collect()
}

/// `psi / rho`: eigenfunction of the non-Hermitian Hamiltonian (unnormalized).
pub fn gs_wavefunction(psi: &[f64], rho: &[f64]) -> Vec<f64> {
    psi.iter().zip(rho).map(|(p, r)| p / r).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenRow {
    pub x: f64,
    pub z: f64,
    pub phi: f64,
    pub psi: f64,
    pub psi_gs: f64,
}

#[derive(Debug, Clone)]
pub struct EigenfunctionTable {
    pub rows: Vec<EigenRow>,
    pub energy: f64,
    pub parity: Parity,
    /// Factor applied to the raw parity solution.
    pub normalization: f64,
    /// `∫ psi^2 dx` after normalization, by the trapezoid rule.
    pub norm_x: f64,
    /// `∫ phi^2 dz` after normalization, by the trapezoid rule.
    pub norm_z: f64,
}

/// `psi(x) = A^(-1/2) phi(z(x))` and `psi_gs = psi / rho` on an increasing `x` grid.
pub fn wavefunction_x(
    spec: &LadderSpec,
    map: &CoordinateMap,
    energy: f64,
    parity: Parity,
    xs: &[f64],
) -> Result<EigenfunctionTable, Error> {
    let p = &spec.params;
    let wt = omega_tilde(p)?;
    let e = energy - p.energy_shift();
    let mut zs = Vec::with_capacity(xs.len());
    let mut phi = Vec::with_capacity(xs.len());
    let mut psi = Vec::with_capacity(xs.len());
    for &x in xs {
        let z = map.z_at(x)?;
        let f = parity_function(parity, e, wt, z)?;
        zs.push(z);
        phi.push(f);
        psi.push(f / spec.a.value(x)?.sqrt());
    }
    let sq: Vec<f64> = psi.iter().map(|v| v * v).collect();
    let raw_norm = trapezoid(xs, &sq).sqrt();
    let c = if raw_norm > 0.0 { 1.0 / raw_norm } else { 1.0 };
    phi.iter_mut().for_each(|v| *v *= c);
    psi.iter_mut().for_each(|v| *v *= c);
    let rho = rho_on_grid(spec, map, xs)?;
    let psi_gs = gs_wavefunction(&psi, &rho);
    let norm_x = trapezoid(xs, &psi.iter().map(|v| v * v).collect::<Vec<_>>());
    let norm_z = trapezoid(&zs, &phi.iter().map(|v| v * v).collect::<Vec<_>>());
    let rows = (0..xs.len())
        .map(|i| EigenRow {
            x: xs[i],
            z: zs[i],
            phi: phi[i],
            psi: psi[i],
            psi_gs: psi_gs[i],
        })
        .collect();
    Ok(EigenfunctionTable {
        rows,
        energy,
        parity,
        normalization: c,
        norm_x,
        norm_z,
    })
}

impl EigenfunctionTable {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), Error> {
        writeln!(out, "x,z,phi,psi,psi_gs")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_g(r.x),
                fmt_g(r.z),
                fmt_g(r.phi),
                fmt_g(r.psi),
                fmt_g(r.psi_gs)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Bindings};
    use crate::mapping::build_map;
    use crate::model::{BCoefficient, KineticCoefficient};

    fn params(w: f64, a: f64, b: f64) -> SwansonParams {
        SwansonParams::new(w, a, b, 1.0).unwrap()
    }

    // Box-exact levels of (-pi/2, pi/2) at wtilde = 1/2, from a 30-digit root search.
    const SOLITON_BOX: [f64; 5] = [
        1.079_521_912_496_514_5,
        4.173_323_020_899_761,
        9.191_932_729_989_036,
        16.198_091_422_149_954,
        25.200_854_800_561_512,
    ];

    #[test]
    fn ladder_examples() {
        let s = ladder_spectrum(&params(1.0, 0.0, 0.0), DomainClass::UnboundedLine, 2).unwrap();
        assert_eq!(s.energies(), vec![0.5, 1.5, 2.5]);
        let s = ladder_spectrum(&params(1.4, 0.2, 0.2), DomainClass::UnboundedLine, 0).unwrap();
        assert!((s.levels[0].energy - 0.670_820_4).abs() < 1e-7);
        assert_eq!(s.levels[0].parity, Some(Parity::Even));
    }

    #[test]
    fn ladder_refuses_bounded_domain() {
        let d = DomainClass::BoundedInterval { zminus: -1.0, zplus: 1.0 };
        assert!(matches!(ladder_spectrum(&params(1.0, 0.0, 0.0), d, 3), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn box_approx_examples() {
        let p = params(1.0, 0.0, 0.0);
        let s = box_spectrum_approx(&p, PI / 2.0, 3);
        for (l, n) in s.levels.iter().zip(1..) {
            assert!((l.energy - (n * n) as f64).abs() < 1e-12);
        }
        let s = box_spectrum_approx(&p, PI.sqrt() / 2.0, 2);
        assert!((s.levels[1].energy - 4.0 * PI).abs() < 1e-12);
        assert_eq!(s.levels[0].parity, Some(Parity::Even));
        assert_eq!(s.levels[1].parity, Some(Parity::Odd));
    }

    #[test]
    fn box_exact_matches_frozen_values() {
        let s = box_spectrum_exact(&params(1.0, 0.0, 0.0), PI / 2.0, 5).unwrap();
        for (l, e) in s.levels.iter().zip(SOLITON_BOX) {
            assert!((l.energy - e).abs() < 1e-9, "{} vs {e}", l.energy);
            let n2 = (l.n * l.n) as f64;
            assert!(l.energy >= n2 && l.energy <= n2 + 0.616_850_3);
        }
    }

    #[test]
    fn box_exact_small_frequency_is_a_box() {
        // wtilde = 0.01 needs 1 + 2(a+b) + (a-b)^2 = 4e-4
        let s = (0.0004f64 - 1.0) / 2.0;
        let p = params(1.0 + s, s / 2.0, s / 2.0);
        let r = box_spectrum_exact(&p, PI / 2.0, 4).unwrap();
        for l in &r.levels {
            let n2 = (l.n * l.n) as f64;
            assert!((l.energy - n2).abs() < 1e-3, "{}", l.energy);
        }
    }

    #[test]
    fn determinant_reduces_to_parity_conditions() {
        let p = params(1.0, 0.0, 0.0);
        let a = box_spectrum_exact(&p, PI / 2.0, 4).unwrap();
        let b = box_spectrum_interval(&p, -PI / 2.0, PI / 2.0, 4).unwrap();
        for (x, y) in a.levels.iter().zip(&b.levels) {
            assert!((x.energy - y.energy).abs() < 1e-9);
        }
        let shifted = box_spectrum_interval(&p, -1.0, 2.0, 3).unwrap();
        assert!(shifted.levels.windows(2).all(|w| w[1].energy > w[0].energy));
    }

    #[test]
    fn ground_state_gaussian_ratio() {
        let p = params(1.0, 0.0, 0.0);
        let grid = [0.0, 2.0];
        let phi = eigenfunction_z(&p, 0.5, Parity::Even, &grid).unwrap();
        assert!((phi[1] / phi[0] - (-1f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn first_odd_state_has_single_node() {
        let p = params(1.0, 0.0, 0.0);
        let grid: Vec<f64> = (-400..=400).map(|i| i as f64 * 0.025).collect();
        let phi = eigenfunction_z(&p, 1.5, Parity::Odd, &grid).unwrap();
        let sign_changes = phi.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
        assert_eq!(sign_changes, 0);
        assert_eq!(phi[400], 0.0);
        assert!(phi[399] < 0.0 && phi[401] > 0.0);
        let sq: Vec<f64> = phi.iter().map(|v| v * v).collect();
        assert!((trapezoid(&grid, &sq) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn box_eigenfunction_vanishes_at_walls() {
        let p = params(1.0, 0.0, 0.0);
        let s = box_spectrum_exact(&p, PI / 2.0, 1).unwrap();
        let grid: Vec<f64> = (-200..=200).map(|i| i as f64 * PI / 400.0).collect();
        let phi = eigenfunction_z(&p, s.levels[0].energy, Parity::Even, &grid).unwrap();
        let peak = phi.iter().fold(0f64, |m, v| m.max(v.abs()));
        assert!(phi[0].abs() <= 1e-9 * peak && phi[400].abs() <= 1e-9 * peak);
    }

    fn spec_for(mass: &str, p: SwansonParams) -> (LadderSpec, CoordinateMap) {
        let a = KineticCoefficient::from_mass(parse(mass, &[]).unwrap(), Bindings::new());
        let map = build_map(&a, 0.0, 1e-13).unwrap();
        (LadderSpec::new(a, BCoefficient::default(), p), map)
    }

    #[test]
    fn nonlinear_oscillator_ground_state() {
        let p = params(1.0, 0.0, 0.0);
        let (spec, map) = spec_for("1/(1+x^2)", p);
        let xs: Vec<f64> = (-3000..=3000).map(|i| i as f64 * 0.01).collect();
        let t = wavefunction_x(&spec, &map, 0.5, Parity::Even, &xs).unwrap();
        assert!((t.norm_x - 1.0).abs() < 1e-12);
        // the two trapezoid sums differ by discretization only
        assert!((t.norm_z - 1.0).abs() < 1e-5);
        let direct = |x: f64| (1.0 + x * x).powf(-0.25) * (-0.25 * x.asinh().powi(2)).exp();
        let ratio = t.rows[3100].psi / t.rows[3000].psi;
        assert!((ratio - direct(1.0) / direct(0.0)).abs() < 1e-10);
        assert!(t.rows.iter().all(|r| r.psi == r.psi_gs));
    }

    #[test]
    fn constant_mass_identity() {
        let p = params(1.0, 0.0, 0.0);
        let a = KineticCoefficient::direct(parse("1", &[]).unwrap(), Bindings::new());
        let map = build_map(&a, 0.0, 1e-13).unwrap();
        let spec = LadderSpec::new(a, BCoefficient::default(), p);
        let xs: Vec<f64> = (-1000..=1000).map(|i| i as f64 * 0.01).collect();
        let t = wavefunction_x(&spec, &map, 1.5, Parity::Odd, &xs).unwrap();
        assert!(t.rows.iter().all(|r| (r.phi - r.psi).abs() < 1e-15));
    }

    #[test]
    fn rho_examples() {
        let p = params(1.0, 0.2, -0.2);
        let a = KineticCoefficient::direct(parse("1/sqrt(2)", &[]).unwrap(), Bindings::new());
        let map = build_map(&a, 0.0, 1e-13).unwrap();
        let spec = LadderSpec::new(a, BCoefficient::Explicit(parse("x/sqrt(2)", &[]).unwrap()), p);
        let r = rho_weight(&spec, &map, 1.0).unwrap() / rho_weight(&spec, &map, 0.0).unwrap();
        assert!((r - (-0.2f64).exp()).abs() < 1e-12);

        let sym = params(1.4, 0.2, 0.2);
        let (spec, map) = spec_for("1/(1+x^2)", sym);
        assert_eq!(rho_weight(&spec, &map, 2.0).unwrap(), 1.0);
    }

    #[test]
    fn rho_closed_form_for_derived_b() {
        let p = params(1.0, 0.2, -0.2);
        let (spec, map) = spec_for("1/(1+x^2)", p);
        let xs = [-2.0, -0.5, 0.0, 1.0, 3.0];
        let rho = rho_on_grid(&spec, &map, &xs).unwrap();
        for (&x, &r) in xs.iter().zip(&rho) {
            let z = x.asinh();
            assert!((r - (-0.1 * z * z).exp()).abs() < 1e-11, "{x}");
            assert!((rho_weight(&spec, &map, x).unwrap() - r).abs() < 1e-11);
        }
    }

    #[test]
    fn wavefunction_csv_header() {
        let p = params(1.0, 0.0, 0.0);
        let (spec, map) = spec_for("1", p);
        let t = wavefunction_x(&spec, &map, 0.5, Parity::Even, &[-1.0, 0.0, 1.0]).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,z,phi,psi,psi_gs\n"));
        assert_eq!(text.lines().count(), 4);
    }
}
