use serde::{Deserialize, Serialize};

use crate::model::{critical_width, endemic_equilibrium, InfectionResponse, ModelParams};
use crate::solver::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Spreading,
    Vanishing,
    Undetermined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Spreading => "spreading",
            Verdict::Vanishing => "vanishing",
            Verdict::Undetermined => "undetermined",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Some frame reached `R0f >= 1 + margin`; spreading follows rigorously.
    ReproductionThreshold,
    /// Width beyond `width_factor * h*` with sup u above `equilibrium_fraction * u*`.
    WidthAndPersistence,
    /// Sup-norms decayed and the width stopped growing over the trailing window.
    DecayAndPlateau,
    /// Initial data identically zero.
    ZeroData,
    /// Horizon reached without a decision.
    HorizonExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifierConfig {
    pub spread_margin: f64,
    /// Vanishing needs `sup u + sup v` below this fraction of its initial value.
    pub vanish_fraction: f64,
    /// Vanishing needs trailing width growth below this multiple of `h0`.
    pub plateau_tolerance: f64,
    pub trailing_fraction: f64,
    pub width_factor: f64,
    pub equilibrium_fraction: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            spread_margin: 1e-6,
            vanish_fraction: 1e-6,
            plateau_tolerance: 1e-6,
            trailing_fraction: 0.1,
            width_factor: 10.0,
            equilibrium_fraction: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub criterion: Criterion,
    pub trigger_time: Option<f64>,
    pub r0f_at_trigger: Option<f64>,
    pub final_time: f64,
    pub final_width: f64,
    pub final_sup_u: f64,
    pub final_sup_v: f64,
    /// Width growth over the trailing window.
    pub trailing_growth: f64,
}

/// Spreading/vanishing verdict for a (possibly partial) trajectory.
pub fn classify(
    traj: &Trajectory,
    p: &ModelParams,
    g: &InfectionResponse,
    cfg: &ClassifierConfig,
) -> Classification {
    let (first, last) = match (traj.first(), traj.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => {
            return Classification {
                verdict: Verdict::Undetermined,
                criterion: Criterion::HorizonExhausted,
                trigger_time: None,
                r0f_at_trigger: None,
                final_time: 0.0,
                final_width: 2.0 * p.h0,
                final_sup_u: 0.0,
                final_sup_v: 0.0,
                trailing_growth: 0.0,
            }
        }
    };
    let t_end = last.t;
    let window_start = (1.0 - cfg.trailing_fraction) * t_end;
    let idx = traj.frames.partition_point(|f| f.t < window_start);
    let trailing_growth = last.width - traj.frames[idx.min(traj.frames.len() - 1)].width;
    let mut out = Classification {
        verdict: Verdict::Undetermined,
        criterion: Criterion::HorizonExhausted,
        trigger_time: None,
        r0f_at_trigger: None,
        final_time: t_end,
        final_width: last.width,
        final_sup_u: last.sup_u,
        final_sup_v: last.sup_v,
        trailing_growth,
    };

    let initial_sup = first.sup_u + first.sup_v;
    if initial_sup == 0.0 {
        out.verdict = Verdict::Vanishing;
        out.criterion = Criterion::ZeroData;
        out.trigger_time = Some(0.0);
        return out;
    }

    if let Some(f) = traj.frames.iter().find(|f| f.r0f >= 1.0 + cfg.spread_margin) {
        out.verdict = Verdict::Spreading;
        out.criterion = Criterion::ReproductionThreshold;
        out.trigger_time = Some(f.t);
        out.r0f_at_trigger = Some(f.r0f);
        return out;
    }
    if let (Some(hs), Ok(Some(eq))) = (critical_width(p, g), endemic_equilibrium(p, g)) {
        if let Some(f) = traj.frames.iter().find(|f| {
            f.width > cfg.width_factor * hs && f.sup_u > cfg.equilibrium_fraction * eq.u
        }) {
            out.verdict = Verdict::Spreading;
            out.criterion = Criterion::WidthAndPersistence;
            out.trigger_time = Some(f.t);
            out.r0f_at_trigger = Some(f.r0f);
            return out;
        }
    }

    let window_frames = traj.frames.len() - idx;
    if window_frames >= 2
        && last.sup_u + last.sup_v < cfg.vanish_fraction * initial_sup
        && trailing_growth < cfg.plateau_tolerance * p.h0
    {
        out.verdict = Verdict::Vanishing;
        out.criterion = Criterion::DecayAndPlateau;
        out.trigger_time = Some(t_end);
        out.r0f_at_trigger = Some(last.r0f);
    }
    out
}
