//! Independent references used to check the PDE solver: the spatially
//! homogeneous ODE, a discrete eigenvalue check and grid refinement studies.
//!
//! Nothing here is on the production path of [`crate::solver::simulate`].

use serde::Serialize;

use crate::analysis::mass_residual_at;
use crate::model::{principal_eigenvalue, InfectionResponse, InitialData, ModelParams};
use crate::solver::{simulate, Monitors, SolverConfig, Trajectory};
use crate::{Error, Result};

/// Fixed-step samples of `u' = -a11 u + a12 v`, `v' = -a22 v + G(u)`,
/// with the right-hand side stored for Hermite interpolation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdeSeries {
    pub t: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub du: Vec<f64>,
    pub dv: Vec<f64>,
}

impl OdeSeries {
    pub fn last(&self) -> (f64, f64, f64) {
        let n = self.t.len() - 1;
        (self.t[n], self.u[n], self.v[n])
    }

    /// Cubic Hermite interpolation; clamps outside the computed range.
    pub fn at(&self, t: f64) -> (f64, f64) {
        let n = self.t.len();
        if t <= self.t[0] {
            return (self.u[0], self.v[0]);
        }
        if t >= self.t[n - 1] {
            return (self.u[n - 1], self.v[n - 1]);
        }
        let i = self.t.partition_point(|&s| s <= t) - 1;
        let h = self.t[i + 1] - self.t[i];
        let s = (t - self.t[i]) / h;
        let (h00, h10) = ((1.0 + 2.0 * s) * (1.0 - s).powi(2), s * (1.0 - s).powi(2));
        let (h01, h11) = (s * s * (3.0 - 2.0 * s), s * s * (s - 1.0));
        let herm = |y: &[f64], dy: &[f64]| {
            h00 * y[i] + h10 * h * dy[i] + h01 * y[i + 1] + h11 * h * dy[i + 1]
        };
        (herm(&self.u, &self.du), herm(&self.v, &self.dv))
    }
}

fn rhs(p: &ModelParams, g: &InfectionResponse, u: f64, v: f64) -> (f64, f64) {
    (-p.a11 * u + p.a12 * v, -p.a22 * v + g.eval(u))
}

/// Classic RK4 at fixed `dt` (which must not exceed `1e-3 / max(a11, a22)`).
pub fn ode_solve(
    p: &ModelParams,
    g: &InfectionResponse,
    u0: f64,
    v0: f64,
    t_max: f64,
    dt: f64,
) -> Result<OdeSeries> {
    for (name, value) in [("u0", u0), ("v0", v0), ("t_max", t_max)] {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::InvalidParameter {
                name,
                value,
                reason: "must be finite and non-negative",
            });
        }
    }
    let dt_cap = 1e-3 / p.a11.max(p.a22);
    if !(dt > 0.0 && dt <= dt_cap * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter {
            name: "dt",
            value: dt,
            reason: "must lie in (0, 1e-3 / max(a11, a22)]",
        });
    }
    let steps = (t_max / dt).ceil() as usize;
    let dt = if steps > 0 { t_max / steps as f64 } else { dt };
    let mut out = OdeSeries {
        t: Vec::with_capacity(steps + 1),
        u: Vec::with_capacity(steps + 1),
        v: Vec::with_capacity(steps + 1),
        du: Vec::with_capacity(steps + 1),
        dv: Vec::with_capacity(steps + 1),
    };
    let (mut u, mut v) = (u0, v0);
    for k in 0..=steps {
        let (du, dv) = rhs(p, g, u, v);
        out.t.push(k as f64 * dt);
        out.u.push(u);
        out.v.push(v);
        out.du.push(du);
        out.dv.push(dv);
        if k == steps {
            break;
        }
        let (k1u, k1v) = (du, dv);
        let (k2u, k2v) = rhs(p, g, u + 0.5 * dt * k1u, v + 0.5 * dt * k1v);
        let (k3u, k3v) = rhs(p, g, u + 0.5 * dt * k2u, v + 0.5 * dt * k2v);
        let (k4u, k4v) = rhs(p, g, u + dt * k3u, v + dt * k3v);
        u += dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        if !(u.is_finite() && v.is_finite()) {
            return Err(Error::Numeric(format!(
                "ODE became non-finite at t = {}",
                (k + 1) as f64 * dt
            )));
        }
    }
    Ok(out)
}

/// Worst excess of the PDE fields over the ODE upper solution, beyond `tol`,
/// across all frames. Zero means the PDE is dominated everywhere.
pub fn dominance_check(traj: &Trajectory, ode: &OdeSeries, tol: f64) -> f64 {
    traj.frames
        .iter()
        .map(|f| {
            let (ub, vb) = ode.at(f.t);
            (f.sup_u - ub - tol).max(f.sup_v - vb - tol).max(0.0)
        })
        .fold(0.0, f64::max)
}

/// A run to be repeated on successively refined grids.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub params: ModelParams,
    pub response: InfectionResponse,
    pub init: InitialData,
    /// Base-level solver settings; `n_cells` and `dt_max` are refined together.
    pub solver: SolverConfig,
    pub t_end: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementLevel {
    pub n_cells: usize,
    pub dt_max: f64,
    pub final_h: f64,
    pub mass_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementStudy {
    pub levels: Vec<RefinementLevel>,
    /// `log2` of successive-difference ratios of the final right front.
    pub front_orders: Vec<f64>,
    /// `log2` of successive mass-residual ratios.
    pub mass_orders: Vec<f64>,
    /// Ratios `|r_k| / |r_{k+1}|` of the mass residual at `t_end`.
    pub mass_ratios: Vec<f64>,
    /// Differences or residuals failed to decrease monotonically.
    pub inconclusive: bool,
}

/// Runs `scenario` at `N, 2N, 4N, ...` with `dt_max` halved alongside the
/// grid spacing, recording a frame at every step so the time integral in the
/// mass balance is resolved at the same rate.
pub fn refinement_study(scenario: &Scenario, levels: usize) -> Result<RefinementStudy> {
    if levels < 3 {
        return Err(Error::InvalidParameter {
            name: "levels",
            value: levels as f64,
            reason: "a refinement study needs at least 3 levels",
        });
    }
    let mut out = Vec::with_capacity(levels);
    for k in 0..levels {
        let scale = (1usize << k) as f64;
        let mut cfg = scenario.solver.clone();
        cfg.n_cells = scenario.solver.n_cells << k;
        cfg.dt_max = scenario.solver.dt_max / scale;
        cfg.frame_stride = cfg.dt_max;
        cfg.t_max = scenario.t_end;
        cfg.early_stop = false;
        cfg.keep_fields = false;
        cfg.snapshot_times.clear();
        let run = simulate(
            &scenario.params,
            &scenario.response,
            &scenario.init,
            &cfg,
            &Monitors::none(),
        )?;
        let traj = &run.trajectory;
        let last = traj
            .last()
            .ok_or_else(|| Error::Numeric("empty trajectory".into()))?;
        let mass_residual = mass_residual_at(traj, &scenario.params, scenario.t_end)
            .ok_or_else(|| Error::Numeric("no frame at the study end time".into()))?;
        out.push(RefinementLevel {
            n_cells: cfg.n_cells,
            dt_max: cfg.dt_max,
            final_h: last.h,
            mass_residual,
        });
    }
    let diffs: Vec<f64> = out
        .windows(2)
        .map(|w| (w[1].final_h - w[0].final_h).abs())
        .collect();
    let ratio = |a: f64, b: f64| if b > 0.0 { a / b } else if a > 0.0 { f64::INFINITY } else { 1.0 };
    let front_orders: Vec<f64> = diffs.windows(2).map(|w| ratio(w[0], w[1]).log2()).collect();
    let mass_ratios: Vec<f64> = out
        .windows(2)
        .map(|w| ratio(w[0].mass_residual.abs(), w[1].mass_residual.abs()))
        .collect();
    let mass_orders = mass_ratios.iter().map(|r| r.log2()).collect();
    let all_zero = diffs.iter().all(|&d| d == 0.0) && out.iter().all(|l| l.mass_residual == 0.0);
    let inconclusive = !all_zero
        && (diffs.windows(2).any(|w| w[1] >= w[0])
            || out
                .windows(2)
                .any(|w| w[1].mass_residual.abs() >= w[0].mass_residual.abs()));
    Ok(RefinementStudy {
        levels: out,
        front_orders,
        mass_orders,
        mass_ratios,
        inconclusive,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenCheck {
    pub n_cells: usize,
    pub dx: f64,
    /// Rayleigh quotient of the discrete operator on the sampled sine mode.
    pub discrete: f64,
    pub closed_form: f64,
    pub discrepancy: f64,
}

/// Compares the Rayleigh quotient of
/// `-d D2 + a11 - G'(0) a12 / a22` (Dirichlet, `n_cells` intervals) on
/// `sin(pi (x - g) / width)` with the closed-form principal eigenvalue.
pub fn eigen_check(
    p: &ModelParams,
    g: &InfectionResponse,
    width: f64,
    n_cells: usize,
) -> Result<EigenCheck> {
    let closed_form = principal_eigenvalue(p, g, width)?;
    if n_cells < 2 {
        return Err(Error::InvalidParameter {
            name: "n_cells",
            value: n_cells as f64,
            reason: "need at least 2 cells",
        });
    }
    let dx = width / n_cells as f64;
    let shift = p.a11 - g.deriv_at_zero() * p.a12 / p.a22;
    let psi: Vec<f64> = (0..=n_cells)
        .map(|j| (std::f64::consts::PI * j as f64 / n_cells as f64).sin())
        .map(|s| if s.abs() < 1e-300 { 0.0 } else { s })
        .collect();
    let (mut num, mut den) = (0.0, 0.0);
    for j in 1..n_cells {
        let lap = (psi[j - 1] - 2.0 * psi[j] + psi[j + 1]) / (dx * dx);
        num += psi[j] * (-p.d * lap + shift * psi[j]);
        den += psi[j] * psi[j];
    }
    let discrete = num / den;
    Ok(EigenCheck {
        n_cells,
        dx,
        discrete,
        closed_form,
        discrepancy: discrete - closed_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::endemic_equilibrium;
    use std::f64::consts::PI;

    #[test]
    fn decoupled_decay_is_exact_exponential() {
        let p = ModelParams::new(1.0, 0.7, 1e-300, 1.0, 1.0, 1.0).unwrap();
        let g = InfectionResponse::monod(1.0).unwrap();
        let s = ode_solve(&p, &g, 2.0, 0.0, 5.0, 1e-3).unwrap();
        for (t, u) in s.t.iter().zip(&s.u) {
            let exact = 2.0 * (-0.7 * t).exp();
            assert!((u - exact).abs() <= 1e-8 * exact, "t={t}");
        }
    }

    #[test]
    fn converges_to_equilibrium_or_extinction() {
        let p = ModelParams::unit();
        for a21 in [1.5, 2.0, 4.0] {
            let g = InfectionResponse::monod(a21).unwrap();
            let e = endemic_equilibrium(&p, &g).unwrap().unwrap();
            let (_, u, v) = ode_solve(&p, &g, 0.3, 0.1, 300.0, 1e-3).unwrap().last();
            assert!((u - e.u).abs() <= 1e-6 * e.u, "a21={a21}: {u} vs {}", e.u);
            assert!((v - e.v).abs() <= 1e-6 * e.v);
        }
        let g = InfectionResponse::monod(0.5).unwrap();
        let (_, u, v) = ode_solve(&p, &g, 1.0, 1.0, 100.0, 1e-3).unwrap().last();
        assert!(u < 1e-4 && v < 1e-4);
    }

    #[test]
    fn weighted_sum_non_increasing_when_subcritical() {
        let p = ModelParams::unit();
        let g = InfectionResponse::monod(0.9).unwrap();
        let s = ode_solve(&p, &g, 3.0, 0.2, 20.0, 1e-3).unwrap();
        let e: Vec<f64> = s.u.iter().zip(&s.v).map(|(u, v)| u + v).collect();
        assert!(e.windows(2).all(|w| w[1] <= w[0] + 1e-14));
    }

    #[test]
    fn rejects_large_step() {
        let p = ModelParams::unit();
        let g = InfectionResponse::monod(2.0).unwrap();
        assert!(ode_solve(&p, &g, 1.0, 1.0, 1.0, 1e-2).is_err());
    }

    #[test]
    fn hermite_interpolation_is_accurate() {
        let p = ModelParams::unit();
        let g = InfectionResponse::monod(2.0).unwrap();
        let coarse = ode_solve(&p, &g, 0.5, 0.0, 2.0, 1e-3).unwrap();
        let fine = ode_solve(&p, &g, 0.5, 0.0, 2.0, 1e-4).unwrap();
        for k in 0..200 {
            let t = 0.00731 + k as f64 * 0.00997;
            let (u, v) = coarse.at(t);
            let i = (t / 1e-4).round() as usize;
            let (uf, vf) = fine.at(fine.t[i]);
            let (ud, vd) = (uf + fine.du[i] * (t - fine.t[i]), vf + fine.dv[i] * (t - fine.t[i]));
            assert!((u - ud).abs() < 1e-8 && (v - vd).abs() < 1e-8);
        }
    }

    #[test]
    fn eigen_discrepancy_matches_discrete_symbol() {
        let p = ModelParams::unit();
        let g = InfectionResponse::monod(2.0).unwrap();
        let c = eigen_check(&p, &g, PI, 256).unwrap();
        // the sine mode is an exact eigenvector of the second difference
        let symbol = 4.0 / (c.dx * c.dx) * (PI / 512.0).sin().powi(2);
        assert!((c.discrepancy - (symbol - 1.0)).abs() < 1e-10);
        assert!(c.discrepancy.abs() < 1e-3);
    }

    #[test]
    fn eigen_linear_term_is_additive() {
        let p = ModelParams::unit();
        let a = eigen_check(&p, &InfectionResponse::linear(0.5).unwrap(), 3.0, 64).unwrap();
        let b = eigen_check(&p, &InfectionResponse::linear(1.75).unwrap(), 3.0, 64).unwrap();
        assert!(((a.discrete - b.discrete) - 1.25).abs() < 1e-12);
        assert!(((a.closed_form - b.closed_form) - 1.25).abs() < 1e-12);
    }
}
