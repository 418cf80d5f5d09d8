//! Front-fixing IMEX integrator for the two-front problem.
//!
//! The moving habitat `(g(t), h(t))` is mapped onto the fixed interval
//! `[-h0, h0]`, which turns the free boundaries into advection terms
//! `A w_y` with `A` affine in `y`. Each step advances the fronts by forward
//! Euler from one-sided gradients, then updates `w` with implicit diffusion
//! and explicit upwind advection/reaction, and `z` fully explicitly with zero
//! inflow at both ends.

mod state;
mod trajectory;
pub mod tridiag;

use serde::{Deserialize, Serialize};

pub use state::SolverState;
pub use trajectory::{Fields, Frame, Trajectory};

use crate::analysis::{
    bound_certificate, classify, BoundCertificate, Classification, ClassifierConfig, Verdict,
};
use crate::model::{free_boundary_reproduction_number, InfectionResponse, InitialData, ModelParams};
use crate::{Error, Result};
use tridiag::solve_tridiagonal;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Number of cells `N` of the fixed grid (even, at least 16).
    pub n_cells: usize,
    pub dt_max: f64,
    /// Fraction of the advective CFL limit `dy / max|A|`.
    pub cfl_adv: f64,
    /// Largest front displacement per step, as a fraction of the physical cell.
    pub front_cfl: f64,
    pub t_max: f64,
    /// Time between recorded frames.
    pub frame_stride: f64,
    /// Stop as soon as the classifier reaches a verdict.
    pub early_stop: bool,
    /// Keep `w`, `z` on every frame (needed for profile comparisons).
    pub keep_fields: bool,
    /// Extra times at which full states are stored in `Trajectory::snapshots`.
    pub snapshot_times: Vec<f64>,
    pub classifier: ClassifierConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self::defaults_for(&ModelParams::unit())
    }
}

impl SolverConfig {
    /// `N = 256`, `dt_max = 1e-3 h0^2 / d`, `t_max = 200 / min(a11, a22)`,
    /// 2000 frames over the horizon.
    pub fn defaults_for(p: &ModelParams) -> Self {
        let t_max = 200.0 / p.a11.min(p.a22);
        Self {
            n_cells: 256,
            dt_max: 1e-3 * p.h0 * p.h0 / p.d,
            cfl_adv: 0.5,
            front_cfl: 0.2,
            t_max,
            frame_stride: t_max / 2000.0,
            early_stop: true,
            keep_fields: false,
            snapshot_times: Vec::new(),
            classifier: ClassifierConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_cells < 16 || !self.n_cells.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                name: "n_cells",
                value: self.n_cells as f64,
                reason: "must be even and at least 16",
            });
        }
        for (name, value) in [
            ("dt_max", self.dt_max),
            ("cfl_adv", self.cfl_adv),
            ("front_cfl", self.front_cfl),
            ("t_max", self.t_max),
            ("frame_stride", self.frame_stride),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite and strictly positive",
                });
            }
        }
        if self.cfl_adv > 1.0 {
            return Err(Error::InvalidParameter {
                name: "cfl_adv",
                value: self.cfl_adv,
                reason: "must not exceed 1",
            });
        }
        Ok(())
    }
}

/// Runtime checks of the a-priori estimates, evaluated on every frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Monitors {
    /// `sup w <= C1`, `sup z <= C2` (absolute slack `1e-8`).
    pub bounds: bool,
    /// Front speeds at most `1.1 C3`.
    pub front_speed: bool,
    /// `-2 h0 < g + h < 2 h0`.
    pub symmetry: bool,
    /// Clipped mass below `1e-8` of the current mass.
    pub clipping: bool,
    /// Abort the run on the first violation instead of only recording it.
    pub abort_on_violation: bool,
}

impl Default for Monitors {
    fn default() -> Self {
        Self {
            bounds: true,
            front_speed: true,
            symmetry: true,
            clipping: true,
            abort_on_violation: true,
        }
    }
}

impl Monitors {
    pub fn none() -> Self {
        Self {
            bounds: false,
            front_speed: false,
            symmetry: false,
            clipping: false,
            abort_on_violation: false,
        }
    }
}

pub const BOUND_SLACK: f64 = 1e-8;
pub const SPEED_MARGIN: f64 = 1.1;
pub const CLIP_FRACTION: f64 = 1e-8;

/// Worst values seen by the monitors over a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MonitorReport {
    pub max_bound_excess: f64,
    pub max_speed_ratio: f64,
    pub max_symmetry_excess: f64,
    pub max_clip_fraction: f64,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SimulationOutcome {
    pub trajectory: Trajectory,
    pub classification: Classification,
    pub certificate: Option<BoundCertificate>,
    pub monitors: MonitorReport,
}

/// Coefficients `(A, B)` of `w_t = A w_y + B w_yy + ...` at node `y`.
pub fn transform_coefficients(
    g: f64,
    h: f64,
    g_speed: f64,
    h_speed: f64,
    y: f64,
    h0: f64,
    d: f64,
) -> Result<(f64, f64)> {
    let width = h - g;
    if !(width > 0.0) {
        return Err(Error::Domain(format!("degenerate habitat: g = {g}, h = {h}")));
    }
    let a = (y * (h_speed - g_speed) + h0 * (h_speed + g_speed)) / width;
    let b = 4.0 * h0 * h0 * d / (width * width);
    Ok((a, b))
}

/// `(g', h')` from second-order one-sided gradients of `w` at both ends.
pub fn front_speeds(state: &SolverState, p: &ModelParams) -> (f64, f64) {
    let n = state.n_cells();
    let dy = state.dy();
    let w = &state.w;
    let scale = 2.0 * state.h0 * p.mu / state.width();
    let wy_right = (3.0 * w[n] - 4.0 * w[n - 1] + w[n - 2]) / (2.0 * dy);
    let wy_left = (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * dy);
    let h_speed = (-scale * wy_right).max(0.0);
    let g_speed = (-scale * wy_left).min(0.0);
    (g_speed, h_speed)
}

/// What one step did.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub dt: f64,
    pub g_speed: f64,
    pub h_speed: f64,
    pub clipped: f64,
}

/// Reusable buffers for stepping one state.
#[derive(Debug, Clone, Default)]
pub struct Integrator {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    rhs: Vec<f64>,
    scratch: Vec<f64>,
    z_next: Vec<f64>,
}

impl Integrator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Advances `state` by one step no longer than `dt_limit`.
    pub fn step(
        &mut self,
        state: &mut SolverState,
        p: &ModelParams,
        g_fn: &InfectionResponse,
        cfg: &SolverConfig,
        dt_limit: f64,
    ) -> Result<StepReport> {
        let n = state.n_cells();
        let m = n - 1;
        let h0 = state.h0;
        let dy = state.dy();

        let (g_speed, h_speed) = front_speeds(state, p);
        let width = state.width();
        let max_speed = h_speed.max(-g_speed);
        let mut dt = cfg.dt_max.min(dt_limit).min(0.5 / p.a11.max(p.a22));
        if max_speed > 0.0 {
            dt = dt.min(cfg.front_cfl * (width / n as f64) / max_speed);
            let a_max = 2.0 * h0 * max_speed / width;
            dt = dt.min(cfg.cfl_adv * dy / a_max);
        }

        state.g += dt * g_speed;
        state.h += dt * h_speed;
        let (_, b) = transform_coefficients(state.g, state.h, g_speed, h_speed, 0.0, h0, p.d)?;
        let new_width = state.width();
        let a_slope = (h_speed - g_speed) / new_width;
        let a_shift = h0 * (h_speed + g_speed) / new_width;
        let r = dt * b / (dy * dy);

        self.lower.resize(m, -r);
        self.upper.resize(m, -r);
        self.diag.resize(m, 1.0 + 2.0 * r);
        self.lower.fill(-r);
        self.upper.fill(-r);
        self.diag.fill(1.0 + 2.0 * r);
        self.rhs.resize(m, 0.0);
        self.scratch.resize(m, 0.0);
        self.z_next.resize(n + 1, 0.0);

        let (w, z) = (&state.w, &state.z);
        let c = dt / dy;
        for j in 1..n {
            let a = state.y(j) * a_slope + a_shift;
            let (dw, dz) = if a > 0.0 {
                (w[j + 1] - w[j], z[j + 1] - z[j])
            } else {
                (w[j] - w[j - 1], z[j] - z[j - 1])
            };
            self.rhs[j - 1] = w[j] + c * a * dw + dt * (-p.a11 * w[j] + p.a12 * z[j]);
            self.z_next[j] = z[j] + c * a * dz + dt * (-p.a22 * z[j] + g_fn.eval(w[j]));
        }
        self.z_next[0] = 0.0;
        self.z_next[n] = 0.0;
        solve_tridiagonal(&self.lower, &self.diag, &self.upper, &mut self.rhs, &mut self.scratch);

        let mut clipped = 0.0;
        state.w[1..n].copy_from_slice(&self.rhs);
        std::mem::swap(&mut state.z, &mut self.z_next);
        state.w[0] = 0.0;
        state.w[n] = 0.0;
        for v in state.w.iter_mut().chain(state.z.iter_mut()) {
            if *v < 0.0 {
                clipped -= *v;
                *v = 0.0;
            }
        }
        let dx = dy * state.width() / (2.0 * h0);
        state.t += dt;

        if !(state.g.is_finite() && state.h.is_finite())
            || state.w.iter().chain(state.z.iter()).any(|v| !v.is_finite())
        {
            return Err(Error::Numeric(format!("non-finite state at t = {}", state.t)));
        }
        Ok(StepReport {
            dt,
            g_speed,
            h_speed,
            clipped: clipped * dx,
        })
    }
}

/// One step with freshly allocated buffers.
pub fn step(
    state: &mut SolverState,
    p: &ModelParams,
    g_fn: &InfectionResponse,
    cfg: &SolverConfig,
) -> Result<StepReport> {
    Integrator::new().step(state, p, g_fn, cfg, f64::INFINITY)
}

pub(crate) fn make_frame(
    state: &SolverState,
    p: &ModelParams,
    g_fn: &InfectionResponse,
    clipped: f64,
    keep_fields: bool,
) -> Frame {
    let ratio = p.a12 / p.a22;
    let (g_speed, h_speed) = front_speeds(state, p);
    Frame {
        t: state.t,
        g: state.g,
        h: state.h,
        width: state.width(),
        sup_u: state.sup_w(),
        sup_v: state.sup_z(),
        mass: state.integrate(|w, z| w + ratio * z),
        reaction: state.integrate(|w, _| -p.a11 * w + ratio * g_fn.eval(w)),
        r0f: free_boundary_reproduction_number(p, g_fn, state.width()).unwrap_or(0.0),
        g_speed,
        h_speed,
        clipped,
        fields: keep_fields.then(|| Fields {
            w: state.w.clone(),
            z: state.z.clone(),
        }),
    }
}

struct MonitorState<'a> {
    cfg: &'a Monitors,
    cert: Option<&'a BoundCertificate>,
    h0: f64,
    report: MonitorReport,
}

impl MonitorState<'_> {
    fn check(&mut self, f: &Frame) -> Result<()> {
        let mut found: Vec<(&'static str, String)> = Vec::new();
        if let (true, Some(c)) = (self.cfg.bounds, self.cert) {
            let excess = (f.sup_u - c.c1).max(f.sup_v - c.c2);
            self.report.max_bound_excess = self.report.max_bound_excess.max(excess);
            if excess > BOUND_SLACK {
                found.push(("bounds", format!(
                    "sup u = {}, sup v = {} exceed C1 = {}, C2 = {}",
                    f.sup_u, f.sup_v, c.c1, c.c2
                )));
            }
        }
        if let (true, Some(c)) = (self.cfg.front_speed, self.cert) {
            let ratio = f.h_speed.max(-f.g_speed) / c.c3;
            self.report.max_speed_ratio = self.report.max_speed_ratio.max(ratio);
            if ratio > SPEED_MARGIN {
                found.push(("front_speed", format!(
                    "front speed {} exceeds {} C3 with C3 = {}",
                    f.h_speed.max(-f.g_speed), SPEED_MARGIN, c.c3
                )));
            }
        }
        if self.cfg.symmetry {
            let excess = (f.g + f.h).abs() - 2.0 * self.h0;
            self.report.max_symmetry_excess = self.report.max_symmetry_excess.max(excess.max(0.0));
            if excess >= 0.0 {
                found.push(("symmetry", format!("g + h = {} outside (-2h0, 2h0)", f.g + f.h)));
            }
        }
        if self.cfg.clipping && f.clipped > 0.0 {
            let frac = f.clipped / f.mass.max(f64::MIN_POSITIVE);
            self.report.max_clip_fraction = self.report.max_clip_fraction.max(frac);
            if frac > CLIP_FRACTION {
                found.push(("clipping", format!("clipped mass fraction {frac:e}")));
            }
        }
        if let Some((monitor, detail)) = found.first() {
            if self.cfg.abort_on_violation {
                return Err(Error::MonitorViolation {
                    monitor,
                    t: f.t,
                    detail: detail.clone(),
                });
            }
        }
        for (monitor, detail) in found {
            self.report.violations.push(format!("t = {}: {monitor}: {detail}", f.t));
        }
        Ok(())
    }
}

/// Integrates from the initial data to `t_max` (or an earlier verdict when
/// `early_stop` is set), recording a frame every `frame_stride`.
pub fn simulate(
    p: &ModelParams,
    g_fn: &InfectionResponse,
    init: &InitialData,
    cfg: &SolverConfig,
    monitors: &Monitors,
) -> Result<SimulationOutcome> {
    p.validate()?;
    init.validate()?;
    cfg.validate()?;
    let mut state = SolverState::initial(p, init, cfg.n_cells)?;

    let certificate = if monitors.bounds || monitors.front_speed {
        Some(bound_certificate(p, g_fn, init)?)
    } else {
        None
    };
    let mut mon = MonitorState {
        cfg: monitors,
        cert: certificate.as_ref(),
        h0: p.h0,
        report: MonitorReport::default(),
    };

    let mut snapshots: Vec<f64> = cfg
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t >= 0.0 && t <= cfg.t_max)
        .collect();
    snapshots.sort_by(f64::total_cmp);
    snapshots.dedup();
    let mut next_snapshot = 0;

    let mut traj = Trajectory {
        h0: p.h0,
        n_cells: cfg.n_cells,
        ..Default::default()
    };
    let mut clipped = 0.0;
    let first = make_frame(&state, p, g_fn, clipped, cfg.keep_fields);
    mon.check(&first)?;
    traj.frames.push(first);
    while next_snapshot < snapshots.len() && snapshots[next_snapshot] <= 0.0 {
        traj.snapshots.push(state.clone());
        next_snapshot += 1;
    }

    let mut frame_index = 1usize;
    let mut integrator = Integrator::new();
    let mut classification = classify(&traj, p, g_fn, &cfg.classifier);
    let snap_eps = 1e-12 * cfg.t_max.max(1.0);

    while state.t < cfg.t_max - snap_eps {
        let next_frame_t = (frame_index as f64 * cfg.frame_stride).min(cfg.t_max);
        let mut target = next_frame_t;
        if let Some(&ts) = snapshots.get(next_snapshot) {
            target = target.min(ts);
        }
        let dt_limit = target - state.t;
        let report = match integrator.step(&mut state, p, g_fn, cfg, dt_limit) {
            Ok(r) => r,
            Err(Error::Numeric(detail)) => {
                return Err(Error::BlowUp {
                    t: state.t,
                    detail,
                    partial: Box::new(traj),
                })
            }
            Err(e) => return Err(e),
        };
        traj.steps += 1;
        clipped += report.clipped;
        if (state.t - target).abs() <= snap_eps {
            state.t = target;
        }
        while next_snapshot < snapshots.len() && state.t >= snapshots[next_snapshot] - snap_eps {
            traj.snapshots.push(state.clone());
            next_snapshot += 1;
        }
        if state.t >= next_frame_t - snap_eps {
            let frame = make_frame(&state, p, g_fn, clipped, cfg.keep_fields);
            mon.check(&frame)?;
            traj.frames.push(frame);
            frame_index += 1;
            if cfg.early_stop {
                classification = classify(&traj, p, g_fn, &cfg.classifier);
                if classification.verdict != Verdict::Undetermined {
                    break;
                }
            }
        }
    }
    if !cfg.early_stop || classification.verdict == Verdict::Undetermined {
        classification = classify(&traj, p, g_fn, &cfg.classifier);
    }
    Ok(SimulationOutcome {
        trajectory: traj,
        classification,
        certificate,
        monitors: mon.report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn coefficients_identity_at_start() {
        let (a, b) = transform_coefficients(-1.0, 1.0, 0.0, 0.0, 0.3, 1.0, 2.5).unwrap();
        assert_eq!(a, 0.0);
        assert_eq!(b, 2.5);
    }

    #[test]
    fn coefficients_substitution() {
        let (a, _) = transform_coefficients(-2.0, 2.0, -1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!((a - 0.5).abs() < 1e-15);
        // symmetric fronts: A is odd in y
        let (a0, _) = transform_coefficients(-2.0, 2.0, -1.0, 1.0, 0.0, 1.0, 1.0).unwrap();
        let (am, _) = transform_coefficients(-2.0, 2.0, -1.0, 1.0, -0.7, 1.0, 1.0).unwrap();
        let (ap, _) = transform_coefficients(-2.0, 2.0, -1.0, 1.0, 0.7, 1.0, 1.0).unwrap();
        assert_eq!(a0, 0.0);
        assert_eq!(am, -ap);
        assert!(transform_coefficients(1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn zero_field_has_zero_speed() {
        let p = ModelParams::unit();
        let init = InitialData::cosine(0.0, 1.0).unwrap();
        let s = SolverState::initial(&p, &init, 64).unwrap();
        assert_eq!(front_speeds(&s, &p), (0.0, 0.0));
    }

    #[test]
    fn cosine_speed_is_second_order() {
        // w = cos(pi y / 2) on [-1, 1]: exact h' = mu pi / (2 h0).
        let p = ModelParams::unit().with_mu(1.5);
        let exact = 1.5 * PI / 2.0;
        let mut errs = Vec::new();
        for n in [32, 64, 128] {
            let init = InitialData::cosine(1.0, 1.0).unwrap();
            let s = SolverState::initial(&p, &init, n).unwrap();
            let (gs, hs) = front_speeds(&s, &p);
            assert_eq!(gs, -hs);
            errs.push((hs - exact).abs());
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((1.8..2.2).contains(&order), "order {order}");
        }
        assert!(errs[2] < 1e-3);
    }

    #[test]
    fn one_step_keeps_dirichlet_ends() {
        let p = ModelParams::unit();
        let g = InfectionResponse::monod(2.0).unwrap();
        let init = InitialData::cosine(1.0, 1.0).unwrap();
        let mut s = SolverState::initial(&p, &init, 64).unwrap();
        let cfg = SolverConfig::defaults_for(&p);
        step(&mut s, &p, &g, &cfg).unwrap();
        assert_eq!((s.w[0], s.w[64], s.z[0], s.z[64]), (0.0, 0.0, 0.0, 0.0));
        assert!(s.h > 1.0 && s.g < -1.0);
    }

    #[test]
    fn zero_data_stays_zero() {
        let p = ModelParams::unit();
        let g = InfectionResponse::monod(2.0).unwrap();
        let init = InitialData::cosine(0.0, 1.0).unwrap();
        let mut cfg = SolverConfig::defaults_for(&p);
        cfg.t_max = 2.0;
        cfg.frame_stride = 0.5;
        cfg.early_stop = false;
        let out = simulate(&p, &g, &init, &cfg, &Monitors::default()).unwrap();
        for f in &out.trajectory.frames {
            assert_eq!((f.g, f.h, f.sup_u, f.sup_v), (-1.0, 1.0, 0.0, 0.0));
        }
        assert_eq!(out.trajectory.t_end(), 2.0);
    }

    #[test]
    fn config_validation() {
        let mut cfg = SolverConfig::default();
        cfg.n_cells = 15;
        assert!(cfg.validate().is_err());
        cfg.n_cells = 64;
        cfg.dt_max = 0.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn frames_and_snapshots_hit_requested_times() {
        let p = ModelParams::unit();
        let g = InfectionResponse::monod(2.0).unwrap();
        let init = InitialData::cosine(0.5, 1.0).unwrap();
        let mut cfg = SolverConfig::defaults_for(&p);
        cfg.n_cells = 32;
        cfg.t_max = 1.0;
        cfg.frame_stride = 0.25;
        cfg.early_stop = false;
        cfg.snapshot_times = vec![0.0, 0.3, 1.0];
        let out = simulate(&p, &g, &init, &cfg, &Monitors::default()).unwrap();
        let times: Vec<f64> = out.trajectory.frames.iter().map(|f| f.t).collect();
        assert_eq!(times, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let snaps: Vec<f64> = out.trajectory.snapshots.iter().map(|s| s.t).collect();
        assert_eq!(snaps, vec![0.0, 0.3, 1.0]);
    }
}
