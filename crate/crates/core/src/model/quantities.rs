use std::f64::consts::PI;

use serde::Serialize;

use super::roots::bisect_root;
use super::{InfectionResponse, ModelParams};
use crate::{Error, Result};

/// `G'(0) a12 / a22`, the linearised production rate of bacteria.
fn linear_gain(p: &ModelParams, g: &InfectionResponse) -> f64 {
    g.deriv_at_zero() * p.a12 / p.a22
}

fn check_width(width: f64) -> Result<()> {
    if !(width.is_finite() && width > 0.0) {
        return Err(Error::Domain(format!("habitat width must be positive (got {width})")));
    }
    Ok(())
}

/// `R0 = G'(0) a12 / (a11 a22)` of the spatially homogeneous system.
pub fn basic_reproduction_number(p: &ModelParams, g: &InfectionResponse) -> f64 {
    g.deriv_at_zero() * p.a12 / (p.a11 * p.a22)
}

/// Reproduction number of the habitat `(g, h)` with Dirichlet ends, as a
/// function of its width `h - g`.
pub fn free_boundary_reproduction_number(
    p: &ModelParams,
    g: &InfectionResponse,
    width: f64,
) -> Result<f64> {
    check_width(width)?;
    let k = PI / width;
    Ok(linear_gain(p, g) / (p.a11 + p.d * k * k))
}

/// Principal Dirichlet eigenvalue `a11 + d (pi/width)^2 - G'(0) a12 / a22`.
/// Its sign is the sign of `1 - R0f(width)`.
pub fn principal_eigenvalue(p: &ModelParams, g: &InfectionResponse, width: f64) -> Result<f64> {
    check_width(width)?;
    let k = PI / width;
    Ok(p.a11 + p.d * k * k - linear_gain(p, g))
}

/// Width at which `R0f = 1`, defined only when `R0 > 1`.
pub fn critical_width(p: &ModelParams, g: &InfectionResponse) -> Option<f64> {
    let excess = linear_gain(p, g) - p.a11;
    (excess > 0.0).then(|| PI * (p.d / excess).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Equilibrium {
    pub u: f64,
    pub v: f64,
}

/// Positive steady state of the homogeneous system: the root of
/// `a11 u = (a12/a22) G(u)` with `v = G(u) / a22`. Absent when `R0 <= 1`.
pub fn endemic_equilibrium(p: &ModelParams, g: &InfectionResponse) -> Result<Option<Equilibrium>> {
    if basic_reproduction_number(p, g) <= 1.0 {
        return Ok(None);
    }
    let f = |u: f64| (p.a12 / p.a22) * g.eval(u) / u - p.a11;

    let mut lo = 1e-8;
    let mut found_lo = false;
    for _ in 0..80 {
        if f(lo) > 0.0 {
            found_lo = true;
            break;
        }
        lo *= 0.5;
    }
    let mut hi = 1.0;
    let mut found_hi = false;
    for _ in 0..400 {
        if f(hi) < 0.0 {
            found_hi = true;
            break;
        }
        hi *= 2.0;
    }
    if !(found_lo && found_hi) {
        // No crossing: a linear G with R0 > 1 has no positive steady state.
        return Ok(None);
    }
    let u = bisect_root(f, lo, hi)?;
    Ok(Some(Equilibrium {
        u,
        v: g.eval(u) / p.a22,
    }))
}
