//! Finite-difference spectra of the Hermitian equivalent, in `z` and in `x`.

use crate::mapping::{CoordinateMap, DomainClass};
use crate::model::{omega_tilde, KineticCoefficient, SwansonParams};
use crate::potential::v_eff_reduced;
use crate::spectrum::{Level, Method, Parity, SpectrumResult};
use crate::Error;

use super::tridiag::{eigenvector, lowest_eigenvalues, TridiagonalOperator};

/// Relative bisection tolerance for eigenvalues.
pub const EIGEN_REL_TOL: f64 = 1e-13;
/// Boundary amplitude (relative to the peak) above which a truncation is reported.
pub const BOUNDARY_AMPLITUDE: f64 = 1e-8;
/// Gaussian tail level that fixes the automatic truncation.
pub const TAIL_LEVEL: f64 = 1e-12;
/// Distance kept from a finite end of the `z` image when truncating in `x`.
pub const WALL_GAP: f64 = 1e-7;
/// Smallest accepted grid.
pub const MIN_INTERVALS: usize = 200;

/// Half-width `Z` of the window used for an infinite `z` end. Starts from
/// `exp(-wt Z^2 / 2) < TAIL_LEVEL` and widens until the polynomial growth of the
/// highest requested state is also beaten.
pub fn auto_truncation(wt: f64, levels: usize) -> f64 {
    let target = -TAIL_LEVEL.ln();
    let mut z = (2.0 * target / wt).sqrt();
    let degree = levels as f64 + 0.5;
    while 0.5 * wt * z * z - degree * z.max(1.0).ln() < target {
        z += 0.25;
    }
    z
}

fn check_grid(intervals: usize) -> Result<(), Error> {
    if intervals < MIN_INTERVALS {
        return Err(Error::InvalidParams(format!(
            "grid needs at least {MIN_INTERVALS} intervals (got {intervals})"
        )));
    }
    Ok(())
}

fn number_levels(
    method: Method,
    energies: Vec<f64>,
    p: &SwansonParams,
    domain: DomainClass,
    symmetric: bool,
    warnings: Vec<String>,
) -> SpectrumResult {
    let first = if matches!(domain, DomainClass::BoundedInterval { .. }) { 1 } else { 0 };
    let levels = energies
        .into_iter()
        .enumerate()
        .map(|(i, e)| Level {
            n: i + first,
            energy: e,
            parity: symmetric.then(|| Parity::of_rank(i)),
        })
        .collect();
    SpectrumResult {
        method,
        levels,
        params: *p,
        domain,
        warnings,
    }
}

/// Amplitude check on the lowest eigenvector; dividing by `scale` turns matrix
/// eigenvector entries into wavefunction values.
fn truncation_warnings(t: &TridiagonalOperator, lowest: f64, scale: &[f64], ends: (bool, bool)) -> Vec<String> {
    if !(ends.0 || ends.1) || t.is_empty() {
        return Vec::new();
    }
    let v = eigenvector(t, lowest);
    let f: Vec<f64> = v.iter().zip(scale).map(|(a, s)| a / s).collect();
    let peak = f.iter().fold(0f64, |m, x| m.max(x.abs()));
    let mut out = Vec::new();
    for (check, value, side) in [(ends.0, f[0], "lower"), (ends.1, f[f.len() - 1], "upper")] {
        if check && peak > 0.0 && value.abs() > BOUNDARY_AMPLITUDE * peak {
            out.push(format!(
                "truncation: lowest eigenfunction has relative amplitude {:.3e} at the {side} cut",
                value.abs() / peak
            ));
        }
    }
    out
}

/// Three-point Laplacian plus `wt^2 z^2` on `(zl, zr)` with Dirichlet ends; an infinite
/// end is replaced by the automatic truncation. `intervals` counts grid intervals.
pub fn fd_spectrum_z(p: &SwansonParams, zl: f64, zr: f64, intervals: usize, count: usize) -> Result<SpectrumResult, Error> {
    check_grid(intervals)?;
    let wt = omega_tilde(p)?;
    let z_cut = auto_truncation(wt, count);
    let lo = if zl.is_finite() { zl } else { -z_cut };
    let hi = if zr.is_finite() { zr } else { z_cut };
    if !(lo < hi) {
        return Err(Error::DomainMismatch(format!("empty interval ({lo}, {hi})")));
    }
    let h = (hi - lo) / intervals as f64;
    let inv_h2 = 1.0 / (h * h);
    let diag: Vec<f64> = (1..intervals)
        .map(|i| {
            let z = lo + h * i as f64;
            2.0 * inv_h2 + wt * wt * z * z
        })
        .collect();
    let off = vec![-inv_h2; intervals - 2];
    let t = TridiagonalOperator::new(diag, off);
    let energies = lowest_eigenvalues(&t, count, EIGEN_REL_TOL);
    let ones = vec![1.0; t.len()];
    let warnings = truncation_warnings(&t, energies[0], &ones, (!zl.is_finite(), !zr.is_finite()));
    for w in &warnings {
        log::warn!("{w}");
    }
    let shift = p.energy_shift();
    let domain = match (zl.is_finite(), zr.is_finite()) {
        (true, true) => DomainClass::BoundedInterval { zminus: zl, zplus: zr },
        (true, false) => DomainClass::SemiBoundedBelow { zminus: zl },
        (false, true) => DomainClass::SemiBoundedAbove { zplus: zr },
        (false, false) => DomainClass::UnboundedLine,
    };
    let symmetric = (lo + hi).abs() <= 1e-12 * hi.abs().max(1.0);
    Ok(number_levels(
        Method::OracleZ,
        energies.into_iter().map(|e| e + shift).collect(),
        p,
        domain,
        symmetric,
        warnings,
    ))
}

/// A position-dependent-mass problem `-(A^2 f')' + V f = E f` on `[xl, xr]`.
pub struct XProblem<'a> {
    pub coeff: &'a KineticCoefficient,
    pub potential: &'a dyn Fn(f64) -> Result<f64, Error>,
    pub xl: f64,
    pub xr: f64,
    /// Centre of the stretched mesh.
    pub center: f64,
    /// Which ends are truncations of an infinite `z` line (checked for leakage).
    pub truncated: (bool, bool),
}

/// Nodes `x = center + sinh(t)` with `t` uniform; returns `(t, x, dx/dt)` including both ends.
pub fn stretched_mesh(xl: f64, xr: f64, center: f64, intervals: usize) -> Vec<(f64, f64, f64)> {
    let tl = (xl - center).asinh();
    let tr = (xr - center).asinh();
    let ht = (tr - tl) / intervals as f64;
    (0..=intervals)
        .map(|j| {
            let t = if j == intervals { tr } else { tl + ht * j as f64 };
            let x = if j == 0 {
                xl
            } else if j == intervals {
                xr
            } else {
                center + t.sinh()
            };
            (t, x, t.cosh())
        })
        .collect()
}

/// Lowest `count` eigenvalues of an [`XProblem`] by conservative differences on the
/// stretched mesh, plus truncation diagnostics.
pub fn fd_eigenvalues_x(prob: &XProblem<'_>, intervals: usize, count: usize) -> Result<(Vec<f64>, Vec<String>), Error> {
    check_grid(intervals)?;
    if !(prob.xl < prob.xr) {
        return Err(Error::DomainMismatch(format!("empty interval ({}, {})", prob.xl, prob.xr)));
    }
    let mesh = stretched_mesh(prob.xl, prob.xr, prob.center, intervals);
    let ht = mesh[1].0 - mesh[0].0;
    // flux weights (A^2 / g') at half-steps
    let mut flux = Vec::with_capacity(intervals);
    for j in 0..intervals {
        let t = 0.5 * (mesh[j].0 + mesh[j + 1].0);
        let x = prob.center + t.sinh();
        let inv = prob.coeff.inverse(x)?;
        let a2 = 1.0 / (inv * inv);
        if !a2.is_finite() {
            return Err(Error::NonPositiveMass { x, value: inv });
        }
        flux.push(a2 / t.cosh());
    }
    let n = intervals - 1;
    let mut mass = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    for j in 1..intervals {
        let m = mesh[j].2 * ht;
        let v = (prob.potential)(mesh[j].1)?;
        mass.push(m);
        diag.push((flux[j - 1] + flux[j]) / ht / m + v);
    }
    let off: Vec<f64> = (1..n).map(|j| -flux[j] / ht / (mass[j - 1] * mass[j]).sqrt()).collect();
    let t = TridiagonalOperator::new(diag, off);
    let energies = lowest_eigenvalues(&t, count, EIGEN_REL_TOL);
    let scale: Vec<f64> = mass.iter().map(|m| m.sqrt()).collect();
    let warnings = truncation_warnings(&t, energies[0], &scale, prob.truncated);
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok((energies, warnings))
}

/// `x`-window for the oracle: infinite `z` ends are cut at the automatic truncation,
/// finite ends at `WALL_GAP` inside the image.
pub fn auto_window(map: &CoordinateMap, domain: DomainClass, wt: f64, count: usize) -> Result<(f64, f64, (bool, bool)), Error> {
    let z_cut = auto_truncation(wt, count);
    let lower_z = match domain {
        DomainClass::BoundedInterval { zminus, .. } | DomainClass::SemiBoundedBelow { zminus } => zminus + WALL_GAP,
        _ => -z_cut,
    };
    let upper_z = match domain {
        DomainClass::BoundedInterval { zplus, .. } | DomainClass::SemiBoundedAbove { zplus } => zplus - WALL_GAP,
        _ => z_cut,
    };
    let lower_inf = !domain.zminus().is_finite();
    let upper_inf = !domain.zplus().is_finite();
    Ok((map.invert(lower_z)?, map.invert(upper_z)?, (lower_inf, upper_inf)))
}

/// Spectrum of the Hermitian equivalent in `x` with the reduced effective potential.
pub fn fd_spectrum_x(
    p: &SwansonParams,
    coeff: &KineticCoefficient,
    map: &CoordinateMap,
    domain: DomainClass,
    window: Option<(f64, f64)>,
    intervals: usize,
    count: usize,
) -> Result<SpectrumResult, Error> {
    let wt = omega_tilde(p)?;
    let (xl, xr, truncated) = match window {
        Some((a, b)) => (a, b, (!domain.zminus().is_finite(), !domain.zplus().is_finite())),
        None => auto_window(map, domain, wt, count)?,
    };
    let potential = |x: f64| v_eff_reduced(coeff, p, x, map.z_at(x)?);
    let prob = XProblem {
        coeff,
        potential: &potential,
        xl,
        xr,
        center: map.anchor(),
        truncated,
    };
    let (energies, warnings) = fd_eigenvalues_x(&prob, intervals, count)?;
    let symmetric = matches!(domain, DomainClass::UnboundedLine)
        || matches!(domain, DomainClass::BoundedInterval { zminus, zplus } if (zminus + zplus).abs() < 1e-9);
    let shift = p.energy_shift();
    Ok(number_levels(
        Method::OracleX,
        energies.into_iter().map(|e| e + shift).collect(),
        p,
        domain,
        symmetric,
        warnings,
    ))
}

/// `|E_N - E| / |E_2N - E|`; about 4 for a second-order scheme.
pub fn richardson_ratio(coarse: f64, fine: f64, exact: f64) -> f64 {
    (coarse - exact).abs() / (fine - exact).abs()
}

/// Second-order Richardson extrapolation from grids `N` and `2N`.
pub fn richardson_extrapolate(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Bindings};
    use crate::mapping::{build_map, classify_domain};
    use crate::spectrum::box_spectrum_exact;
    use std::f64::consts::FRAC_PI_2;

    fn params(w: f64, a: f64, b: f64) -> SwansonParams {
        SwansonParams::new(w, a, b, 1.0).unwrap()
    }

    fn free_box() -> SwansonParams {
        // wtilde = 5e-5 keeps the potential negligible
        let s = (1e-8f64 - 1.0) / 2.0;
        params(1.0 + s, s / 2.0, s / 2.0)
    }

    #[test]
    fn particle_in_a_box_converges_quadratically() {
        let p = free_box();
        let e1 = |n| fd_spectrum_z(&p, -FRAC_PI_2, FRAC_PI_2, n, 2).unwrap().levels[0].energy;
        let (a, b) = (e1(400), e1(800));
        let r = richardson_ratio(a, b, 1.0);
        assert!((3.9..4.1).contains(&r), "{r}");
        assert!((richardson_extrapolate(a, b) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn oscillator_ground_state_on_truncated_line() {
        let p = params(1.0, 0.0, 0.0);
        let s = fd_spectrum_z(&p, f64::NEG_INFINITY, f64::INFINITY, 8000, 3).unwrap();
        assert!((s.levels[0].energy - 0.5).abs() < 1e-5);
        assert_eq!(s.levels[0].n, 0);
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn short_window_warns() {
        let p = params(1.0, 0.0, 0.0);
        let s = fd_spectrum_z(&p, -3.0, f64::INFINITY, 400, 1);
        assert!(s.unwrap().warnings.is_empty(), "finite ends are walls, not truncations");
        let (_, warnings) = {
            let a = KineticCoefficient::direct(parse("1", &[]).unwrap(), Bindings::new());
            let v = |x: f64| Ok(0.25 * x * x);
            let prob = XProblem {
                coeff: &a,
                potential: &v,
                xl: -2.0,
                xr: 2.0,
                center: 0.0,
                truncated: (true, true),
            };
            fd_eigenvalues_x(&prob, 400, 1).unwrap()
        };
        assert_eq!(warnings.len(), 2);
    }

    #[test]
    fn soliton_box_matches_exact() {
        let p = params(1.0, 0.0, 0.0);
        let fd = fd_spectrum_z(&p, -FRAC_PI_2, FRAC_PI_2, 8000, 2).unwrap();
        let exact = box_spectrum_exact(&p, FRAC_PI_2, 2).unwrap();
        assert_eq!(fd.levels[0].n, 1);
        let e1 = fd.levels[0].energy;
        assert!((1.0..=1.616_850_3).contains(&e1));
        // O(h^2) discretization error at N = 8000 is about 1e-7 here
        assert!((e1 - exact.levels[0].energy).abs() < 1e-6);
    }

    #[test]
    fn constant_mass_oscillator_in_x() {
        let p = params(1.0, 0.0, 0.0);
        let a = KineticCoefficient::direct(parse("1", &[]).unwrap(), Bindings::new());
        let map = build_map(&a, 0.0, 1e-13).unwrap();
        let d = classify_domain(&map).unwrap();
        let s = fd_spectrum_x(&p, &a, &map, d, None, 4000, 4).unwrap();
        for l in &s.levels {
            assert!((l.energy - (l.n as f64 + 0.5)).abs() < 1e-3, "{l:?}");
        }
    }

    #[test]
    fn mesh_hits_both_ends() {
        let m = stretched_mesh(-3.0, 20.0, 1.0, 300);
        assert_eq!(m.first().unwrap().1, -3.0);
        assert_eq!(m.last().unwrap().1, 20.0);
        assert!(m.windows(2).all(|w| w[1].1 > w[0].1));
    }

    #[test]
    fn truncation_grows_with_level_count() {
        assert!(auto_truncation(0.5, 10) > auto_truncation(0.5, 1));
        let z = auto_truncation(0.5, 0);
        assert!((-0.25 * z * z).exp() < 1e-12);
    }

    #[test]
    fn tiny_grid_rejected() {
        let p = params(1.0, 0.0, 0.0);
        assert!(matches!(fd_spectrum_z(&p, -1.0, 1.0, 50, 1), Err(Error::InvalidParams(_))));
    }
}
