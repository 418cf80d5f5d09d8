use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::ModelParams;
use crate::{Error, Result};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Which family a response belongs to.
#[derive(Clone)]
pub enum ResponseKind {
    /// `G(z) = a21 z / (1 + z)`.
    Monod { a21: f64 },
    /// `G(z) = slope * z`. Violates the saturation assumption whenever
    /// `slope >= a11 a22 / a12`; kept for negative tests and linear analysis.
    Linear { slope: f64 },
    /// Piecewise-linear interpolation of `(z, G)` samples starting at `z = 0`,
    /// extended linearly beyond the last sample with the last slope.
    Tabulated { z: Vec<f64>, g: Vec<f64> },
    /// User-supplied pair of callables `G` and `G'`.
    Custom {
        name: String,
        eval: ScalarFn,
        deriv: ScalarFn,
    },
}

impl fmt::Debug for ResponseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Monod { a21 } => write!(f, "Monod {{ a21: {a21} }}"),
            Self::Linear { slope } => write!(f, "Linear {{ slope: {slope} }}"),
            Self::Tabulated { z, .. } => write!(f, "Tabulated {{ {} samples }}", z.len()),
            Self::Custom { name, .. } => write!(f, "Custom {{ {name} }}"),
        }
    }
}

/// The infection rate `G` of infectives as a function of bacteria density.
#[derive(Clone, Debug)]
pub struct InfectionResponse {
    kind: ResponseKind,
}

impl InfectionResponse {
    pub fn monod(a21: f64) -> Result<Self> {
        if !(a21.is_finite() && a21 > 0.0) {
            return Err(Error::InvalidParameter {
                name: "a21",
                value: a21,
                reason: "must be finite and strictly positive",
            });
        }
        Ok(Self {
            kind: ResponseKind::Monod { a21 },
        })
    }

    pub fn linear(slope: f64) -> Result<Self> {
        if !(slope.is_finite() && slope > 0.0) {
            return Err(Error::InvalidParameter {
                name: "slope",
                value: slope,
                reason: "must be finite and strictly positive",
            });
        }
        Ok(Self {
            kind: ResponseKind::Linear { slope },
        })
    }

    pub fn tabulated(z: Vec<f64>, g: Vec<f64>) -> Result<Self> {
        if z.len() != g.len() || z.len() < 2 {
            return Err(Error::InvalidResponse(
                "tabulated response needs at least two (z, G) pairs of equal length".into(),
            ));
        }
        if z[0] != 0.0 {
            return Err(Error::InvalidResponse(
                "tabulated response must start at z = 0".into(),
            ));
        }
        if z.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidResponse(
                "tabulated z values must be strictly increasing".into(),
            ));
        }
        if z.iter().chain(g.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidResponse("tabulated values must be finite".into()));
        }
        Ok(Self {
            kind: ResponseKind::Tabulated { z, g },
        })
    }

    pub fn custom<F, D>(name: impl Into<String>, eval: F, deriv: D) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            kind: ResponseKind::Custom {
                name: name.into(),
                eval: Arc::new(eval),
                deriv: Arc::new(deriv),
            },
        }
    }

    pub fn kind(&self) -> &ResponseKind {
        &self.kind
    }

    pub fn label(&self) -> String {
        match &self.kind {
            ResponseKind::Monod { a21 } => format!("monod(a21={a21})"),
            ResponseKind::Linear { slope } => format!("linear(slope={slope})"),
            ResponseKind::Tabulated { z, .. } => format!("tabulated({} samples)", z.len()),
            ResponseKind::Custom { name, .. } => format!("custom({name})"),
        }
    }

    #[inline]
    pub fn eval(&self, z: f64) -> f64 {
        match &self.kind {
            ResponseKind::Monod { a21 } => a21 * z / (1.0 + z),
            ResponseKind::Linear { slope } => slope * z,
            ResponseKind::Tabulated { z: zs, g } => {
                let (k, s) = table_segment(zs, g, z);
                g[k] + s * (z - zs[k])
            }
            ResponseKind::Custom { eval, .. } => eval(z),
        }
    }

    #[inline]
    pub fn deriv(&self, z: f64) -> f64 {
        match &self.kind {
            ResponseKind::Monod { a21 } => a21 / ((1.0 + z) * (1.0 + z)),
            ResponseKind::Linear { slope } => *slope,
            ResponseKind::Tabulated { z: zs, g } => table_segment(zs, g, z).1,
            ResponseKind::Custom { deriv, .. } => deriv(z),
        }
    }

    pub fn deriv_at_zero(&self) -> f64 {
        self.deriv(0.0)
    }

    /// True when `G'` is known to be non-increasing on `[0, inf)`, which
    /// makes endpoint checks of `G'(0) - G'(xi)` exact.
    pub fn has_monotone_derivative(&self) -> bool {
        match &self.kind {
            ResponseKind::Monod { .. } | ResponseKind::Linear { .. } => true,
            ResponseKind::Tabulated { z, g } => {
                let slopes: Vec<f64> = z
                    .windows(2)
                    .zip(g.windows(2))
                    .map(|(zw, gw)| (gw[1] - gw[0]) / (zw[1] - zw[0]))
                    .collect();
                slopes.windows(2).all(|s| s[1] <= s[0])
            }
            ResponseKind::Custom { .. } => false,
        }
    }
}

/// Segment index and slope of the piecewise-linear table at `z`.
fn table_segment(zs: &[f64], g: &[f64], z: f64) -> (usize, f64) {
    let last = zs.len() - 2;
    let k = match zs.partition_point(|&x| x <= z) {
        0 => 0,
        p => (p - 1).min(last),
    };
    (k, (g[k + 1] - g[k]) / (zs[k + 1] - zs[k]))
}

#[derive(Debug, Clone, Serialize)]
pub struct AssumptionCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Probe point where the check failed (or the probe that was used).
    pub witness: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResponseReport {
    pub checks: Vec<AssumptionCheck>,
    pub probe_min: f64,
    pub probe_max: f64,
    pub probe_count: usize,
    /// `G'` is not known to be monotone: certificates relying on it are heuristic.
    pub heuristic_derivative: bool,
}

impl ResponseReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Log-spaced probe grid on `[1e-6, 1e6 * max(1, scale)]`.
pub fn default_probe_grid(scale: f64) -> Vec<f64> {
    let lo: f64 = 1e-6;
    let hi = 1e6 * scale.max(1.0);
    let n = 481;
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Checks positivity of `G'`, `G(0) = 0`, monotonicity of `G(z)/z` and the
/// asymptotic slope bound on a probe grid. The limit is only probed at the
/// last grid point.
pub fn validate_response(
    response: &InfectionResponse,
    params: &ModelParams,
    probe_grid: &[f64],
) -> Result<ResponseReport> {
    if probe_grid.len() < 2 {
        return Err(Error::Domain("probe grid needs at least two points".into()));
    }
    if probe_grid[0] <= 0.0 || probe_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain(
            "probe grid must be positive and strictly increasing".into(),
        ));
    }
    let g0 = response.eval(0.0);
    let dg0 = response.deriv(0.0);
    if !g0.is_finite() || !dg0.is_finite() {
        return Err(Error::InvalidResponse("non-finite value at z = 0".into()));
    }
    let mut values = Vec::with_capacity(probe_grid.len());
    for &z in probe_grid {
        let (g, dg) = (response.eval(z), response.deriv(z));
        if !g.is_finite() || !dg.is_finite() {
            return Err(Error::InvalidResponse(format!("non-finite value at z = {z}")));
        }
        values.push((z, g, dg));
    }

    let mut checks = Vec::with_capacity(4);
    checks.push(AssumptionCheck {
        name: "G(0) = 0",
        passed: g0.abs() <= 1e-14,
        witness: Some(0.0),
        detail: format!("G(0) = {g0:e}"),
    });

    let bad_deriv = std::iter::once((0.0, g0, dg0))
        .chain(values.iter().copied())
        .find(|&(_, _, dg)| dg <= 0.0);
    checks.push(AssumptionCheck {
        name: "G' > 0",
        passed: bad_deriv.is_none(),
        witness: bad_deriv.map(|(z, _, _)| z),
        detail: match bad_deriv {
            Some((z, _, dg)) => format!("G'({z:e}) = {dg:e}"),
            None => format!("G'(0) = {dg0}; positive at all {} probes", values.len()),
        },
    });

    let bad_ratio = values.windows(2).find_map(|w| {
        let (r0, r1) = (w[0].1 / w[0].0, w[1].1 / w[1].0);
        (r1 > r0 * (1.0 + 1e-12) + 1e-300).then_some((w[1].0, r0, r1))
    });
    checks.push(AssumptionCheck {
        name: "G(z)/z non-increasing",
        passed: bad_ratio.is_none(),
        witness: bad_ratio.map(|(z, _, _)| z),
        detail: match bad_ratio {
            Some((z, r0, r1)) => format!("ratio rises from {r0:e} to {r1:e} at z = {z:e}"),
            None => "non-increasing on probe grid".into(),
        },
    });

    let &(z_far, g_far, _) = values.last().expect("non-empty grid");
    let slope = g_far / z_far;
    let cap = params.slope_cap();
    checks.push(AssumptionCheck {
        name: "lim G(z)/z < a11 a22 / a12",
        passed: slope < cap,
        witness: Some(z_far),
        detail: format!("G(z)/z = {slope:e} at z = {z_far:e}; cap = {cap:e}"),
    });

    Ok(ResponseReport {
        checks,
        probe_min: probe_grid[0],
        probe_max: z_far,
        probe_count: probe_grid.len(),
        heuristic_derivative: !response.has_monotone_derivative(),
    })
}
