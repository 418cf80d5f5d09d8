use crate::model::{endemic_equilibrium, InfectionResponse, ModelParams};
use crate::solver::Trajectory;
use crate::{Error, Result};

/// Per-frame residual of the integrated mass identity
/// `M(t) = M(0) + (d/mu) (W(0) - W(t)) + int_0^t Q(s) ds`, where `W` is the
/// width and `Q` the reaction integral. Time integral by cumulative trapezoid.
pub fn mass_balance_residual(traj: &Trajectory, p: &ModelParams) -> Vec<f64> {
    let Some(first) = traj.first() else {
        return Vec::new();
    };
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(traj.frames.len());
    out.push(0.0);
    for w in traj.frames.windows(2) {
        acc += 0.5 * (w[0].reaction + w[1].reaction) * (w[1].t - w[0].t);
        let f = &w[1];
        out.push(f.mass - first.mass - (p.d / p.mu) * (first.width - f.width) - acc);
    }
    out
}

/// Residual at the frame recorded at time `t`.
pub fn mass_residual_at(traj: &Trajectory, p: &ModelParams, t: f64) -> Option<f64> {
    let i = traj.frames.iter().position(|f| (f.t - t).abs() <= 1e-9)?;
    mass_balance_residual(traj, p).get(i).copied()
}

/// Largest `max(0, |g + h| - 2 h0)` over the frames; zero means the band holds.
pub fn symmetry_band_check(traj: &Trajectory) -> f64 {
    traj.frames
        .iter()
        .map(|f| ((f.g + f.h).abs() - 2.0 * traj.h0).max(0.0))
        .fold(0.0, f64::max)
}

/// Largest `|g + h|` over the frames.
pub fn max_center_drift(traj: &Trajectory) -> f64 {
    traj.frames.iter().map(|f| (f.g + f.h).abs()).fold(0.0, f64::max)
}

/// Largest decrease of `h` or increase of `g` between consecutive frames.
pub fn front_monotonicity_violation(traj: &Trajectory) -> f64 {
    traj.frames
        .windows(2)
        .map(|w| (w[0].h - w[1].h).max(w[1].g - w[0].g).max(0.0))
        .fold(0.0, f64::max)
}

/// Largest drop of `R0f` between consecutive frames.
pub fn r0f_monotonicity_violation(traj: &Trajectory) -> f64 {
    traj.frames
        .windows(2)
        .map(|w| (w[0].r0f - w[1].r0f).max(0.0))
        .fold(0.0, f64::max)
}

/// Upper bound on the width valid when `R0 <= 1`: `2 h0 + (mu/d) M(0)`.
pub fn vanishing_width_bound(traj: &Trajectory, p: &ModelParams) -> Option<f64> {
    traj.first()
        .map(|f| f.width + (p.mu / p.d) * f.mass)
}

/// `(t, sup_{x in [-m, m]} |u - u*| + |v - v*|)` for every frame with stored
/// fields. Positions outside `[g, h]` count with `u = v = 0`.
pub fn equilibrium_convergence(
    traj: &Trajectory,
    p: &ModelParams,
    g: &InfectionResponse,
    half_window: f64,
) -> Result<Vec<(f64, f64)>> {
    let eq = endemic_equilibrium(p, g)?
        .ok_or_else(|| Error::Domain("no endemic equilibrium (R0 <= 1)".into()))?;
    let samples = 2 * traj.n_cells.max(64) + 1;
    let mut out = Vec::new();
    for f in &traj.frames {
        let Some(state) = f.state(traj.h0) else {
            continue;
        };
        let err = (0..samples)
            .map(|k| -half_window + 2.0 * half_window * k as f64 / (samples - 1) as f64)
            .map(|x| {
                let (u, v) = state.sample_physical(x);
                (u - eq.u).abs() + (v - eq.v).abs()
            })
            .fold(0.0, f64::max);
        out.push((f.t, err));
    }
    if out.is_empty() {
        return Err(Error::Domain(
            "trajectory has no stored fields; enable keep_fields".into(),
        ));
    }
    Ok(out)
}
