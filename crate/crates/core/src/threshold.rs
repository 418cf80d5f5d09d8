//! Bisection for the sharp thresholds in the initial-data scale `sigma` and
//! the front-response coefficient `mu`, plus parameter sweeps.
//!
//! Verdicts are monotone in `sigma` by the comparison principle; monotonicity
//! in `mu` is checked on the probes actually run. A probe that ends
//! `Undetermined` is rerun once with a doubled horizon and, if still
//! undecided, counts as "not spreading".

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{Criterion, Verdict};
use crate::model::{
    basic_reproduction_number, endemic_equilibrium, free_boundary_reproduction_number,
    InfectionResponse, InitialData, ModelParams, Shape,
};
use crate::solver::{simulate, Monitors, SolverConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    Sigma,
    Mu,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BisectConfig {
    /// Stop when `(hi - lo) <= tol * hi`.
    pub tol: f64,
    pub max_expansions: usize,
    pub max_shrinks: usize,
    pub max_iterations: usize,
    /// Rerun undecided probes once with `t_max` doubled.
    pub extend_horizon: bool,
    /// Re-simulate at `confirm_lo * lo` and `confirm_hi * hi` after bisection.
    pub confirm_lo: f64,
    pub confirm_hi: f64,
    pub monitors: Monitors,
}

impl Default for BisectConfig {
    fn default() -> Self {
        Self {
            tol: 1e-2,
            max_expansions: 30,
            max_shrinks: 40,
            max_iterations: 60,
            extend_horizon: true,
            confirm_lo: 0.9,
            confirm_hi: 1.1,
            monitors: Monitors::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub value: f64,
    pub verdict: Verdict,
    pub criterion: Criterion,
    pub final_time: f64,
    pub final_width: f64,
    /// The horizon was doubled for this probe.
    pub extended: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum ThresholdStatus {
    /// `R0f(0) >= 1`: every positive value spreads, the threshold is 0.
    Degenerate,
    Converged,
    /// No bracket could be established within the search limits.
    Inconclusive(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub parameter: Parameter,
    pub lo: f64,
    pub hi: f64,
    pub status: ThresholdStatus,
    pub probes: Vec<Probe>,
    pub simulations: usize,
    pub confirm_lo: Option<Probe>,
    pub confirm_hi: Option<Probe>,
    /// No probed value spreads below a probed value that vanishes.
    pub monotone: bool,
    pub solver: SolverConfig,
    pub bisect: BisectConfig,
}

impl ThresholdResult {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn relative_width(&self) -> f64 {
        if self.hi > 0.0 {
            (self.hi - self.lo) / self.hi
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
#[allow(clippy::large_enum_variant)]
pub enum ThresholdOutcome {
    /// `R0 <= 1`: every run vanishes, there is no threshold.
    NoThreshold { r0: f64 },
    Bracket(ThresholdResult),
}

impl ThresholdOutcome {
    pub fn bracket(&self) -> Option<&ThresholdResult> {
        match self {
            ThresholdOutcome::Bracket(r) => Some(r),
            ThresholdOutcome::NoThreshold { .. } => None,
        }
    }
}

struct Prober<'a, F: Fn(f64, &SolverConfig) -> Result<Probe> + Sync> {
    run: F,
    sim: &'a SolverConfig,
    cfg: &'a BisectConfig,
    probes: Vec<Probe>,
    simulations: usize,
}

impl<F: Fn(f64, &SolverConfig) -> Result<Probe> + Sync> Prober<'_, F> {
    fn probe_once(&self, value: f64) -> Result<(Probe, usize)> {
        let mut probe = (self.run)(value, self.sim)?;
        let mut count = 1;
        if probe.verdict == Verdict::Undetermined && self.cfg.extend_horizon {
            let mut longer = self.sim.clone();
            longer.t_max *= 2.0;
            probe = (self.run)(value, &longer)?;
            probe.extended = true;
            count += 1;
        }
        Ok((probe, count))
    }

    fn probe(&mut self, value: f64) -> Result<Verdict> {
        let (probe, count) = self.probe_once(value)?;
        self.simulations += count;
        let v = probe.verdict;
        self.probes.push(probe);
        Ok(v)
    }

    fn monotone(&self) -> bool {
        let min_spreading = self
            .probes
            .iter()
            .filter(|p| p.verdict == Verdict::Spreading)
            .map(|p| p.value)
            .fold(f64::INFINITY, f64::min);
        self.probes
            .iter()
            .filter(|p| p.verdict == Verdict::Vanishing)
            .all(|p| p.value < min_spreading)
    }
}

fn bisect<F>(
    parameter: Parameter,
    seed: f64,
    run: F,
    sim: &SolverConfig,
    cfg: &BisectConfig,
) -> Result<ThresholdResult>
where
    F: Fn(f64, &SolverConfig) -> Result<Probe> + Sync,
{
    let mut pr = Prober {
        run,
        sim,
        cfg,
        probes: Vec::new(),
        simulations: 0,
    };
    let finish = |pr: Prober<'_, F>, lo, hi, status, confirm: (Option<Probe>, Option<Probe>)| {
        let monotone = pr.monotone();
        ThresholdResult {
            parameter,
            lo,
            hi,
            status,
            probes: pr.probes,
            simulations: pr.simulations + confirm.0.is_some() as usize + confirm.1.is_some() as usize,
            confirm_lo: confirm.0,
            confirm_hi: confirm.1,
            monotone,
            solver: sim.clone(),
            bisect: *cfg,
        }
    };

    let mut hi = seed;
    let mut lo: Option<f64> = None;
    let mut expansions = 0;
    while pr.probe(hi)? != Verdict::Spreading {
        lo = Some(hi);
        if expansions == cfg.max_expansions {
            let reason = format!("no spreading probe up to {hi}");
            return Ok(finish(pr, hi, hi, ThresholdStatus::Inconclusive(reason), (None, None)));
        }
        hi *= 2.0;
        expansions += 1;
    }
    let mut lo = match lo {
        Some(lo) => lo,
        None => {
            let mut cand = 0.5 * hi;
            let mut shrinks = 0;
            loop {
                match pr.probe(cand)? {
                    Verdict::Vanishing => break cand,
                    Verdict::Spreading => hi = cand,
                    Verdict::Undetermined => {}
                }
                if shrinks == cfg.max_shrinks {
                    let reason = format!("no vanishing probe down to {cand}");
                    return Ok(finish(pr, 0.0, hi, ThresholdStatus::Inconclusive(reason), (None, None)));
                }
                cand *= 0.5;
                shrinks += 1;
            }
        }
    };
    let mut iterations = 0;
    while hi - lo > cfg.tol * hi && iterations < cfg.max_iterations {
        let mid = 0.5 * (lo + hi);
        if pr.probe(mid)? == Verdict::Spreading {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    let (cl, ch) = rayon::join(
        || pr.probe_once(cfg.confirm_lo * lo),
        || pr.probe_once(cfg.confirm_hi * hi),
    );
    let (cl, ch) = (cl?.0, ch?.0);
    let status = if hi - lo <= cfg.tol * hi {
        ThresholdStatus::Converged
    } else {
        ThresholdStatus::Inconclusive(format!("iteration limit {} reached", cfg.max_iterations))
    };
    Ok(finish(pr, lo, hi, status, (Some(cl), Some(ch))))
}

fn run_probe(
    value: f64,
    p: &ModelParams,
    g: &InfectionResponse,
    init: &InitialData,
    sim: &SolverConfig,
    monitors: &Monitors,
) -> Result<Probe> {
    let mut sim = sim.clone();
    sim.early_stop = true;
    sim.keep_fields = false;
    sim.snapshot_times.clear();
    let out = simulate(p, g, init, &sim, monitors)?;
    let c = out.classification;
    Ok(Probe {
        value,
        verdict: c.verdict,
        criterion: c.criterion,
        final_time: c.final_time,
        final_width: c.final_width,
        extended: false,
    })
}

fn degenerate_or_none(
    parameter: Parameter,
    p: &ModelParams,
    g: &InfectionResponse,
    sim: &SolverConfig,
    cfg: &BisectConfig,
) -> Result<Option<ThresholdOutcome>> {
    let r0 = basic_reproduction_number(p, g);
    if r0 <= 1.0 {
        return Ok(Some(ThresholdOutcome::NoThreshold { r0 }));
    }
    if free_boundary_reproduction_number(p, g, p.initial_width())? >= 1.0 {
        return Ok(Some(ThresholdOutcome::Bracket(ThresholdResult {
            parameter,
            lo: 0.0,
            hi: 0.0,
            status: ThresholdStatus::Degenerate,
            probes: Vec::new(),
            simulations: 0,
            confirm_lo: None,
            confirm_hi: None,
            monotone: true,
            solver: sim.clone(),
            bisect: *cfg,
        })));
    }
    Ok(None)
}

/// Brackets `sigma*` for initial data `(sigma phi, sigma psi)`.
pub fn find_sigma_star(
    p: &ModelParams,
    g: &InfectionResponse,
    phi: &Shape,
    psi: &Shape,
    sim: &SolverConfig,
    cfg: &BisectConfig,
) -> Result<ThresholdOutcome> {
    let base = InitialData::new(1.0, phi.clone(), psi.clone(), p.h0)?;
    if let Some(out) = degenerate_or_none(Parameter::Sigma, p, g, sim, cfg)? {
        return Ok(out);
    }
    let u_star = endemic_equilibrium(p, g)?.map_or(1.0, |e| e.u);
    let sup_phi = base.sup_u0();
    if !(sup_phi > 0.0) {
        return Err(Error::InvalidInitialData("phi has zero sup-norm".into()));
    }
    let seed = 10.0 * u_star / sup_phi;
    let run = |sigma: f64, s: &SolverConfig| {
        run_probe(sigma, p, g, &base.with_sigma(sigma), s, &cfg.monitors)
    };
    Ok(ThresholdOutcome::Bracket(bisect(Parameter::Sigma, seed, run, sim, cfg)?))
}

/// Brackets `mu*` for fixed initial data, starting the search at `p.mu`.
pub fn find_mu_star(
    p: &ModelParams,
    g: &InfectionResponse,
    init: &InitialData,
    sim: &SolverConfig,
    cfg: &BisectConfig,
) -> Result<ThresholdOutcome> {
    init.validate()?;
    if let Some(out) = degenerate_or_none(Parameter::Mu, p, g, sim, cfg)? {
        return Ok(out);
    }
    let run = |mu: f64, s: &SolverConfig| run_probe(mu, &p.with_mu(mu), g, init, s, &cfg.monitors);
    Ok(ThresholdOutcome::Bracket(bisect(Parameter::Mu, p.mu, run, sim, cfg)?))
}

/// Axes of a sweep. `None` keeps the base value; an empty list yields no cells.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepGrid {
    pub sigma: Option<Vec<f64>>,
    pub mu: Option<Vec<f64>>,
    pub d: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub verdict: Verdict,
    pub criterion: Criterion,
    pub final_time: f64,
    pub final_width: f64,
    pub final_sup_u: f64,
    pub final_sup_v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    pub sigma: f64,
    pub mu: f64,
    pub d: f64,
    pub result: std::result::Result<CellSummary, String>,
}

/// Simulates and classifies every point of the grid cross-product in
/// parallel. Failures are recorded per cell.
pub fn sweep(
    p: &ModelParams,
    g: &InfectionResponse,
    init: &InitialData,
    grid: &SweepGrid,
    sim: &SolverConfig,
    monitors: &Monitors,
) -> Vec<SweepCell> {
    let axis = |v: &Option<Vec<f64>>, base: f64| v.clone().unwrap_or_else(|| vec![base]);
    let sigmas = axis(&grid.sigma, init.sigma);
    let mus = axis(&grid.mu, p.mu);
    let ds = axis(&grid.d, p.d);
    let mut points = Vec::with_capacity(sigmas.len() * mus.len() * ds.len());
    for &d in &ds {
        for &mu in &mus {
            for &sigma in &sigmas {
                points.push((sigma, mu, d));
            }
        }
    }
    points
        .into_par_iter()
        .map(|(sigma, mu, d)| {
            let params = p.with_mu(mu).with_d(d);
            let result = simulate(&params, g, &init.with_sigma(sigma), sim, monitors)
                .map(|out| {
                    let c = out.classification;
                    CellSummary {
                        verdict: c.verdict,
                        criterion: c.criterion,
                        final_time: c.final_time,
                        final_width: c.final_width,
                        final_sup_u: c.final_sup_u,
                        final_sup_v: c.final_sup_v,
                    }
                })
                .map_err(|e| e.to_string());
            SweepCell {
                sigma,
                mu,
                d,
                result,
            }
        })
        .collect()
}
