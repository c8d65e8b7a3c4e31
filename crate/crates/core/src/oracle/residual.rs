//! Residual of the non-Hermitian eigenvalue equation on a uniform grid.

use crate::mapping::CoordinateMap;
use crate::model::{LadderSpec, Ordering};
use crate::Error;

/// Coefficients of the ladder operators at the grid points.
struct LadderCoefficients {
    a: Vec<f64>,
    da: Vec<f64>,
    b: Vec<f64>,
}

fn coefficients(spec: &LadderSpec, map: &CoordinateMap, xs: &[f64]) -> Result<LadderCoefficients, Error> {
    let mut out = LadderCoefficients {
        a: Vec::with_capacity(xs.len()),
        da: Vec::with_capacity(xs.len()),
        b: Vec::with_capacity(xs.len()),
    };
    for &x in xs {
        let j = spec.a.jet(x)?;
        out.a.push(j.value);
        out.da.push(j.d1);
        out.b.push(spec.b_pair(map, x)?.0);
    }
    Ok(out)
}

/// Apply `A d/dx + B` (`raising = false`) or `-A d/dx + B - A'` (`raising = true`) with
/// centred differences; the result is valid on `[lo + 1, hi - 1]` when `f` is valid on
/// `[lo, hi]`.
fn apply(c: &LadderCoefficients, f: &[f64], h: f64, lo: usize, hi: usize, raising: bool) -> Vec<f64> {
    let mut g = vec![f64::NAN; f.len()];
    for i in lo + 1..hi {
        let d = (f[i + 1] - f[i - 1]) / (2.0 * h);
        g[i] = if raising {
            -c.a[i] * d + (c.b[i] - c.da[i]) * f[i]
        } else {
            c.a[i] * d + c.b[i] * f[i]
        };
    }
    g
}

/// `||H psi - E psi||_2 / ||psi||_2` over the points where the composed differences are
/// defined (all but two nodes at each end). `xs` must be uniform.
pub fn hgs_residual(
    spec: &LadderSpec,
    map: &CoordinateMap,
    xs: &[f64],
    psi_gs: &[f64],
    energy: f64,
    ordering: Ordering,
) -> Result<f64, Error> {
    let n = xs.len();
    if n < 5 || psi_gs.len() != n {
        return Err(Error::InvalidParams(format!(
            "residual needs matching grids of at least 5 points (got {} and {})",
            n,
            psi_gs.len()
        )));
    }
    let h = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    let c = coefficients(spec, map, xs)?;
    let p = &spec.params;
    let last = n - 1;
    let lower = apply(&c, psi_gs, h, 0, last, false);
    let raise = apply(&c, psi_gs, h, 0, last, true);
    let number = match ordering {
        Ordering::Normal => apply(&c, &lower, h, 1, last - 1, true),
        Ordering::AntiNormal => apply(&c, &raise, h, 1, last - 1, false),
    };
    let lower2 = apply(&c, &lower, h, 1, last - 1, false);
    let raise2 = apply(&c, &raise, h, 1, last - 1, true);
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 2..n - 2 {
        let hpsi = p.w * (number[i] + 0.5 * psi_gs[i]) + p.alpha * lower2[i] + p.beta * raise2[i];
        let r = hpsi - energy * psi_gs[i];
        num += r * r;
        den += psi_gs[i] * psi_gs[i];
    }
    Ok((num / den).sqrt())
}
