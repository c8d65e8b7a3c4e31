//! The Liouville coordinate `z(x) = ∫ dx/A`, its image domain, and its inverse.

use crate::model::KineticCoefficient;
use crate::quadrature::integrate;
use crate::Error;

/// A tail panel contributing less than this (relative to `max(1, |z|)`) closes the end.
pub const TAIL_CONVERGED: f64 = 1e-12;
/// A partial integral beyond this magnitude marks the end as infinite.
pub const TAIL_DIVERGED: f64 = 1e6;
/// Doubling panels tried per side before giving up.
pub const MAX_DOUBLINGS: usize = 96;

// Slow (logarithmic) divergence never reaches TAIL_DIVERGED in floating point; a run of
// panel-to-panel ratios this close to 1 is taken as divergence instead.
const RATIO_DIVERGED: f64 = 0.99;
const RATIO_RUN: usize = 8;
const RATIO_MIN_DOUBLINGS: usize = 20;

const NEAR_PANELS: usize = 32;
const PANEL_SUBDIVISIONS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum EndStatus {
    Finite(f64),
    Infinite,
    Undetermined(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainClass {
    UnboundedLine,
    BoundedInterval { zminus: f64, zplus: f64 },
    SemiBoundedBelow { zminus: f64 },
    SemiBoundedAbove { zplus: f64 },
}

impl DomainClass {
    pub fn name(&self) -> &'static str {
        match self {
            DomainClass::UnboundedLine => "UnboundedLine",
            DomainClass::BoundedInterval { .. } => "BoundedInterval",
            DomainClass::SemiBoundedBelow { .. } => "SemiBoundedBelow",
            DomainClass::SemiBoundedAbove { .. } => "SemiBoundedAbove",
        }
    }

    pub fn zminus(&self) -> f64 {
        match *self {
            DomainClass::BoundedInterval { zminus, .. } | DomainClass::SemiBoundedBelow { zminus } => zminus,
            _ => f64::NEG_INFINITY,
        }
    }

    pub fn zplus(&self) -> f64 {
        match *self {
            DomainClass::BoundedInterval { zplus, .. } | DomainClass::SemiBoundedAbove { zplus } => zplus,
            _ => f64::INFINITY,
        }
    }

    pub fn is_semi_bounded(&self) -> bool {
        matches!(self, DomainClass::SemiBoundedBelow { .. } | DomainClass::SemiBoundedAbove { .. })
    }
}

/// Tabulated monotone map with `z(x0) = z0`.
#[derive(Debug, Clone)]
pub struct CoordinateMap {
    coeff: KineticCoefficient,
    x0: f64,
    z0: f64,
    tol: f64,
    xs: Vec<f64>,
    zs: Vec<f64>,
    lower: EndStatus,
    upper: EndStatus,
}

struct Side {
    xs: Vec<f64>,
    zs: Vec<f64>,
    end: EndStatus,
}

fn build_side(coeff: &KineticCoefficient, x0: f64, dir: f64, tol: f64) -> Result<Side, Error> {
    let f = |x: f64| coeff.inverse(x);
    let mut xs = Vec::new();
    let mut zs = Vec::new();
    let mut z = 0.0;
    let mut prev = x0;
    for i in 1..=NEAR_PANELS {
        let x = x0 + dir * i as f64 / NEAR_PANELS as f64;
        z += integrate(f, prev, x, tol)?;
        xs.push(x);
        zs.push(z);
        prev = x;
    }
    let side = if dir > 0.0 { "upper" } else { "lower" };
    let mut contributions: Vec<f64> = Vec::new();
    for j in 0..MAX_DOUBLINGS {
        let lo = 2f64.powi(j as i32);
        let step = lo / PANEL_SUBDIVISIONS as f64;
        let mut c = 0.0;
        for s in 1..=PANEL_SUBDIVISIONS {
            let x = x0 + dir * (lo + step * s as f64);
            let piece = integrate(f, prev, x, tol)?;
            c += piece.abs();
            z += piece;
            xs.push(x);
            zs.push(z);
            prev = x;
        }
        contributions.push(c);
        if c < TAIL_CONVERGED * z.abs().max(1.0) {
            let mut end = z;
            if j > 0 {
                let r = c / contributions[j - 1];
                if r < 0.9 {
                    end += dir * c * r / (1.0 - r);
                }
            }
            return Ok(Side {
                xs,
                zs,
                end: EndStatus::Finite(end),
            });
        }
        if z.abs() > TAIL_DIVERGED {
            return Ok(Side {
                xs,
                zs,
                end: EndStatus::Infinite,
            });
        }
        if j >= RATIO_MIN_DOUBLINGS {
            let run = &contributions[j - RATIO_RUN..=j];
            if run.windows(2).all(|w| w[1] >= RATIO_DIVERGED * w[0]) {
                return Ok(Side {
                    xs,
                    zs,
                    end: EndStatus::Infinite,
                });
            }
        }
    }
    let last = contributions.last().copied().unwrap_or(f64::NAN);
    Ok(Side {
        xs,
        zs,
        end: EndStatus::Undetermined(format!(
            "after {MAX_DOUBLINGS} doublings ({side} side) the last panel still contributes {last:e}"
        )),
    })
}

/// Build the map anchored at `z(x0) = 0`.
pub fn build_map(coeff: &KineticCoefficient, x0: f64, tol: f64) -> Result<CoordinateMap, Error> {
    build_map_with_offset(coeff, x0, 0.0, tol)
}

/// Build the map anchored at `z(x0) = z0`.
pub fn build_map_with_offset(coeff: &KineticCoefficient, x0: f64, z0: f64, tol: f64) -> Result<CoordinateMap, Error> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!("quadrature tolerance {tol} must be positive")));
    }
    coeff.inverse(x0)?;
    let up = build_side(coeff, x0, 1.0, tol)?;
    let down = build_side(coeff, x0, -1.0, tol)?;
    let mut xs: Vec<f64> = down.xs.iter().rev().copied().collect();
    let mut zs: Vec<f64> = down.zs.iter().rev().map(|z| z + z0).collect();
    xs.push(x0);
    zs.push(z0);
    xs.extend(up.xs.iter());
    zs.extend(up.zs.iter().map(|z| z + z0));
    let shift = |e: EndStatus| match e {
        EndStatus::Finite(v) => EndStatus::Finite(v + z0),
        other => other,
    };
    Ok(CoordinateMap {
        coeff: coeff.clone(),
        x0,
        z0,
        tol,
        xs,
        zs,
        lower: shift(down.end),
        upper: shift(up.end),
    })
}

/// Label both ends of the image.
pub fn classify_domain(map: &CoordinateMap) -> Result<DomainClass, Error> {
    for (status, side) in [(&map.lower, "lower"), (&map.upper, "upper")] {
        if let EndStatus::Undetermined(detail) = status {
            return Err(Error::Inconclusive {
                side,
                detail: detail.clone(),
            });
        }
    }
    Ok(match (&map.lower, &map.upper) {
        (EndStatus::Finite(zminus), EndStatus::Finite(zplus)) => DomainClass::BoundedInterval {
            zminus: *zminus,
            zplus: *zplus,
        },
        (EndStatus::Finite(zminus), _) => DomainClass::SemiBoundedBelow { zminus: *zminus },
        (_, EndStatus::Finite(zplus)) => DomainClass::SemiBoundedAbove { zplus: *zplus },
        _ => DomainClass::UnboundedLine,
    })
}

/// Inverse of the map.
pub fn invert_map(map: &CoordinateMap, z: f64) -> Result<f64, Error> {
    map.invert(z)
}

impl CoordinateMap {
    pub fn anchor(&self) -> f64 {
        self.x0
    }

    pub fn anchor_value(&self) -> f64 {
        self.z0
    }

    pub fn coefficient(&self) -> &KineticCoefficient {
        &self.coeff
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.zs.iter().copied())
    }

    pub fn lower_end(&self) -> &EndStatus {
        &self.lower
    }

    pub fn upper_end(&self) -> &EndStatus {
        &self.upper
    }

    pub fn zminus(&self) -> f64 {
        match self.lower {
            EndStatus::Finite(v) => v,
            _ => f64::NEG_INFINITY,
        }
    }

    pub fn zplus(&self) -> f64 {
        match self.upper {
            EndStatus::Finite(v) => v,
            _ => f64::INFINITY,
        }
    }

    fn nearest_node(&self, x: f64) -> usize {
        match self.xs.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) if i >= self.xs.len() => self.xs.len() - 1,
            Err(i) => {
                if x - self.xs[i - 1] <= self.xs[i] - x {
                    i - 1
                } else {
                    i
                }
            }
        }
    }

    /// `z(x)`, by quadrature from the nearest tabulated node.
    pub fn z_at(&self, x: f64) -> Result<f64, Error> {
        let i = self.nearest_node(x);
        let (xn, zn) = (self.xs[i], self.zs[i]);
        if x == xn {
            return Ok(zn);
        }
        Ok(zn + integrate(|t| self.coeff.inverse(t), xn, x, self.tol)?)
    }

    fn out_of_range(&self, z: f64) -> Error {
        Error::OutOfRange {
            z,
            zminus: self.zminus(),
            zplus: self.zplus(),
        }
    }

    /// Initial guess for the inverse by monotone cubic interpolation of `x(z)`.
    fn interpolate_inverse(&self, z: f64, i: usize) -> f64 {
        let n = self.xs.len();
        let slope = |k: usize| (self.xs[k + 1] - self.xs[k]) / (self.zs[k + 1] - self.zs[k]);
        let node_slope = |k: usize| -> f64 {
            if k == 0 {
                slope(0)
            } else if k == n - 1 {
                slope(n - 2)
            } else {
                let (s0, s1) = (slope(k - 1), slope(k));
                if s0 * s1 <= 0.0 {
                    0.0
                } else {
                    let h0 = self.zs[k] - self.zs[k - 1];
                    let h1 = self.zs[k + 1] - self.zs[k];
                    let w1 = 2.0 * h1 + h0;
                    let w2 = h1 + 2.0 * h0;
                    (w1 + w2) / (w1 / s0 + w2 / s1)
                }
            }
        };
        let h = self.zs[i + 1] - self.zs[i];
        let t = (z - self.zs[i]) / h;
        let (d0, d1) = (node_slope(i), node_slope(i + 1));
        let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        let h10 = t * (1.0 - t) * (1.0 - t);
        let h01 = t * t * (3.0 - 2.0 * t);
        let h11 = t * t * (t - 1.0);
        h00 * self.xs[i] + h10 * h * d0 + h01 * self.xs[i + 1] + h11 * h * d1
    }

    /// Solve `z(x) = z` to about 1e-12 relative in `x`.
    pub fn invert(&self, z: f64) -> Result<f64, Error> {
        if !(z > self.zminus() && z < self.zplus()) {
            return Err(self.out_of_range(z));
        }
        let n = self.xs.len();
        let (mut lo, mut hi, guess);
        if z < self.zs[0] {
            let (xl, xh) = self.extend(z, -1.0)?;
            lo = xl;
            hi = xh;
            guess = 0.5 * (lo + hi);
        } else if z > self.zs[n - 1] {
            let (xl, xh) = self.extend(z, 1.0)?;
            lo = xl;
            hi = xh;
            guess = 0.5 * (lo + hi);
        } else {
            let i = match self.zs.binary_search_by(|p| p.total_cmp(&z)) {
                Ok(i) => return Ok(self.xs[i]),
                Err(i) => i - 1,
            };
            lo = self.xs[i];
            hi = self.xs[i + 1];
            let g = self.interpolate_inverse(z, i);
            guess = if g.is_finite() { g.clamp(lo, hi) } else { 0.5 * (lo + hi) };
        }
        let mut x = guess;
        for _ in 0..200 {
            let r = self.z_at(x)? - z;
            if r == 0.0 {
                return Ok(x);
            }
            if r < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let a = self.coeff.value(x).unwrap_or(f64::INFINITY);
            let mut next = x - r * a;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            let done = (next - x).abs() <= 1e-13 * x.abs().max(1.0) || (hi - lo) <= 1e-14 * x.abs().max(1.0);
            x = next;
            if done {
                return Ok(x);
            }
        }
        Ok(x)
    }

    /// Bracket `z` beyond the node table by stepping outward with doubling strides.
    fn extend(&self, z: f64, dir: f64) -> Result<(f64, f64), Error> {
        let edge = if dir > 0.0 { *self.xs.last().unwrap() } else { self.xs[0] };
        let mut inner = edge;
        let mut stride = (edge - self.x0).abs().max(1.0);
        for _ in 0..64 {
            let outer = inner + dir * stride;
            let zo = self.z_at(outer)?;
            if (dir > 0.0 && zo >= z) || (dir < 0.0 && zo <= z) {
                return Ok(if dir > 0.0 { (inner, outer) } else { (outer, inner) });
            }
            inner = outer;
            stride *= 2.0;
        }
        Err(self.out_of_range(z))
    }
}
