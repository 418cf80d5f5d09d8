use serde::Serialize;

use super::SolverState;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fields {
    pub w: Vec<f64>,
    pub z: Vec<f64>,
}

/// Diagnostics recorded at one sampling time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Frame {
    pub t: f64,
    pub g: f64,
    pub h: f64,
    pub width: f64,
    pub sup_u: f64,
    pub sup_v: f64,
    /// `int (u + (a12/a22) v) dx` over `[g, h]`.
    pub mass: f64,
    /// `int (-a11 u + (a12/a22) G(u)) dx` over `[g, h]`.
    pub reaction: f64,
    pub r0f: f64,
    pub g_speed: f64,
    pub h_speed: f64,
    /// Total mass removed by clipping negative values since `t = 0`.
    pub clipped: f64,
    #[serde(skip)]
    pub fields: Option<Fields>,
}

impl Frame {
    /// Rebuilds the solver state when fields were kept.
    pub fn state(&self, h0: f64) -> Option<SolverState> {
        self.fields.as_ref().map(|f| SolverState {
            t: self.t,
            g: self.g,
            h: self.h,
            h0,
            w: f.w.clone(),
            z: f.z.clone(),
        })
    }
}

/// Ordered frames of one run plus any requested snapshots.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Trajectory {
    pub h0: f64,
    pub n_cells: usize,
    pub frames: Vec<Frame>,
    #[serde(skip)]
    pub snapshots: Vec<SolverState>,
    pub steps: usize,
}

impl Trajectory {
    pub fn first(&self) -> Option<&Frame> {
        self.frames.first()
    }

    pub fn last(&self) -> Option<&Frame> {
        self.frames.last()
    }

    pub fn t_end(&self) -> f64 {
        self.last().map_or(0.0, |f| f.t)
    }

    /// Frame at time `t` (exact match within `1e-9`), if recorded.
    pub fn frame_at(&self, t: f64) -> Option<&Frame> {
        let i = self.frames.partition_point(|f| f.t < t - 1e-9);
        self.frames.get(i).filter(|f| (f.t - t).abs() <= 1e-9)
    }
}
