//! Explicit constants of the comparison constructions: the decaying upper
//! solution that certifies vanishing of small data when `R0f(0) < 1`, and the
//! stationary lower solution `delta * psi` that certifies spreading when
//! `R0f(0) > 1`. Both use `psi(x) = cos(pi x / (2 h0))`.

use std::f64::consts::PI;

use serde::Serialize;

use super::quantities::{endemic_equilibrium, principal_eigenvalue};
use super::roots::largest_satisfying;
use super::{InfectionResponse, ModelParams};
use crate::Result;

/// Samples used to bound `G'(0) - G'(xi)` over an interval of `xi`.
const XI_SAMPLES: usize = 65;

fn min_derivative_drop(g: &InfectionResponse, upper: f64) -> f64 {
    let g0 = g.deriv_at_zero();
    (0..XI_SAMPLES)
        .map(|k| g0 - g.deriv(upper * k as f64 / (XI_SAMPLES - 1) as f64))
        .fold(f64::INFINITY, f64::min)
}

fn max_derivative_drop(g: &InfectionResponse, upper: f64) -> f64 {
    let g0 = g.deriv_at_zero();
    (0..XI_SAMPLES)
        .map(|k| g0 - g.deriv(upper * k as f64 / (XI_SAMPLES - 1) as f64))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Constants of the small-data vanishing certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmallDataBound {
    pub delta: f64,
    pub epsilon: f64,
    /// Principal eigenvalue on the initial habitat (positive).
    pub lambda0: f64,
    /// `G'(0)/a22 + lambda0/(4 a12)`: ratio of the v-component to the u-component.
    pub v_factor: f64,
    /// Sup-norm thresholds `eps * psi(h0 / (1 + delta/2))` and `v_factor` times it.
    pub u_sup_max: f64,
    pub v_sup_max: f64,
    /// True when `G'` is not known to be monotone; the xi-condition was only sampled.
    pub heuristic: bool,
}

impl SmallDataBound {
    /// The upper solution at time zero evaluated at `x`; any initial data
    /// below `(upper_u0(x), v_factor * upper_u0(x))` vanishes.
    pub fn upper_u0(&self, x: f64, h0: f64) -> f64 {
        let s = x / (1.0 + 0.5 * self.delta);
        if s.abs() >= h0 {
            return 0.0;
        }
        self.epsilon * (PI * s / (2.0 * h0)).cos()
    }
}

/// First inequality on `delta` of the upper-solution construction.
pub(crate) fn upper_solution_margin(delta: f64, lambda0: f64, net_gain: f64) -> f64 {
    let q = 1.0 / ((1.0 + delta) * (1.0 + delta));
    -delta + (q - 1.0) * net_gain.abs() + (q - 0.25) * lambda0
}

/// `(delta, epsilon)` such that data below the upper solution vanish.
/// Absent unless `R0f` on the initial habitat is strictly below one.
pub fn small_data_vanishing_bound(
    p: &ModelParams,
    g: &InfectionResponse,
) -> Result<Option<SmallDataBound>> {
    let lambda0 = principal_eigenvalue(p, g, p.initial_width())?;
    if lambda0 <= 0.0 {
        return Ok(None);
    }
    let g0 = g.deriv_at_zero();
    let net_gain = -p.a11 + g0 * p.a12 / p.a22;
    let delta_cap = 1.0;
    let epsilon_of = |delta: f64| delta * delta * p.h0 * p.h0 * (1.0 + delta) / (p.mu * PI);

    let delta1 = largest_satisfying(
        |delta| upper_solution_margin(delta, lambda0, net_gain) >= 0.0,
        delta_cap,
    );
    let xi_margin = |delta: f64| {
        min_derivative_drop(g, epsilon_of(delta)) + (p.a22 - delta) * lambda0 / (4.0 * p.a12)
            - g0 * delta / p.a22
    };
    let delta = largest_satisfying(|delta| xi_margin(delta) >= 0.0, delta1);
    if !(delta > 0.0) {
        return Ok(None);
    }
    let epsilon = epsilon_of(delta);
    let v_factor = g0 / p.a22 + lambda0 / (4.0 * p.a12);
    let u_sup_max = epsilon * (PI / (2.0 + delta)).cos();
    Ok(Some(SmallDataBound {
        delta,
        epsilon,
        lambda0,
        v_factor,
        u_sup_max,
        v_sup_max: u_sup_max * v_factor,
        heuristic: !g.has_monotone_derivative(),
    }))
}

/// Amplitude of the stationary lower solution `(delta psi, v_factor delta psi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubsolutionDelta {
    pub delta: f64,
    /// Principal eigenvalue on the initial habitat (negative).
    pub lambda0: f64,
    pub v_factor: f64,
    /// Upper limit of the search: `u*` when the equilibrium exists, else 1.
    pub delta_cap: f64,
    pub heuristic: bool,
}

/// Largest `delta` with `G'(0) - G'(xi) <= -a22 lambda0 / (4 a12)` for all
/// `xi` in `[0, delta]`. Absent unless the initial eigenvalue is negative; the
/// borderline `lambda0 = 0` case is decided by the classifier instead.
pub fn spreading_subsolution_delta(
    p: &ModelParams,
    g: &InfectionResponse,
) -> Result<Option<SubsolutionDelta>> {
    let lambda0 = principal_eigenvalue(p, g, p.initial_width())?;
    if lambda0 >= 0.0 {
        return Ok(None);
    }
    let delta_cap = endemic_equilibrium(p, g)?.map_or(1.0, |eq| eq.u);
    let allowance = -p.a22 * lambda0 / (4.0 * p.a12);
    let delta = largest_satisfying(|d| max_derivative_drop(g, d) <= allowance, delta_cap);
    if !(delta > 0.0) {
        return Ok(None);
    }
    Ok(Some(SubsolutionDelta {
        delta,
        lambda0,
        v_factor: g.deriv_at_zero() / p.a22 + lambda0 / (4.0 * p.a12),
        delta_cap,
        heuristic: !g.has_monotone_derivative(),
    }))
}
