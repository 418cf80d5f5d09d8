use serde::Serialize;

use crate::model::{InitialData, ModelParams};
use crate::{Error, Result};

/// Fronts and transformed fields at one instant.
///
/// `w` and `z` are the bacteria and infective densities sampled at the
/// `n_cells + 1` uniform nodes `y_j = h0 (2j - n) / n` of the fixed interval
/// `[-h0, h0]`; physical position `x` maps to `y = (2 h0 x - h0 (h + g)) / (h - g)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverState {
    pub t: f64,
    pub g: f64,
    pub h: f64,
    pub h0: f64,
    pub w: Vec<f64>,
    pub z: Vec<f64>,
}

impl SolverState {
    pub fn initial(params: &ModelParams, init: &InitialData, n_cells: usize) -> Result<Self> {
        if (init.h0 - params.h0).abs() > 1e-12 * params.h0 {
            return Err(Error::Domain(format!(
                "initial data defined on half-width {} but model has h0 = {}",
                init.h0, params.h0
            )));
        }
        let h0 = params.h0;
        let mut w: Vec<f64> = (0..=n_cells).map(|j| init.u0(node(h0, n_cells, j))).collect();
        let mut z: Vec<f64> = (0..=n_cells).map(|j| init.v0(node(h0, n_cells, j))).collect();
        for f in [&mut w, &mut z] {
            f[0] = 0.0;
            f[n_cells] = 0.0;
            for v in f.iter_mut() {
                *v = v.max(0.0);
            }
        }
        Ok(Self {
            t: 0.0,
            g: -h0,
            h: h0,
            h0,
            w,
            z,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.w.len() - 1
    }

    pub fn dy(&self) -> f64 {
        2.0 * self.h0 / self.n_cells() as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        node(self.h0, self.n_cells(), j)
    }

    pub fn width(&self) -> f64 {
        self.h - self.g
    }

    /// Physical position of node `j`.
    pub fn x(&self, j: usize) -> f64 {
        0.5 * (self.h + self.g) + self.y(j) * self.width() / (2.0 * self.h0)
    }

    pub fn sup_w(&self) -> f64 {
        self.w.iter().copied().fold(0.0, f64::max)
    }

    pub fn sup_z(&self) -> f64 {
        self.z.iter().copied().fold(0.0, f64::max)
    }

    /// `(u, v)` at physical `x`, linearly interpolated; zero outside `[g, h]`.
    pub fn sample_physical(&self, x: f64) -> (f64, f64) {
        if !(x >= self.g && x <= self.h) {
            return (0.0, 0.0);
        }
        let n = self.n_cells();
        let y = 2.0 * self.h0 * x / self.width() - self.h0 * (self.h + self.g) / self.width();
        let s = ((y + self.h0) / self.dy()).clamp(0.0, n as f64);
        let k = (s.floor() as usize).min(n - 1);
        let f = s - k as f64;
        (
            self.w[k] * (1.0 - f) + self.w[k + 1] * f,
            self.z[k] * (1.0 - f) + self.z[k + 1] * f,
        )
    }

    /// Trapezoid integral over the physical interval of `f(w_j, z_j)`.
    pub fn integrate<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        let n = self.n_cells();
        let inner: f64 = (1..n).map(|j| f(self.w[j], self.z[j])).sum();
        let ends = 0.5 * (f(self.w[0], self.z[0]) + f(self.w[n], self.z[n]));
        (inner + ends) * self.dy() * self.width() / (2.0 * self.h0)
    }
}

#[inline]
pub(crate) fn node(h0: f64, n: usize, j: usize) -> f64 {
    h0 * (2.0 * j as f64 - n as f64) / n as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_at_time_zero_reproduces_initial_data() {
        let p = ModelParams::unit();
        let init = InitialData::cosine(0.7, 1.0).unwrap();
        let s = SolverState::initial(&p, &init, 64).unwrap();
        assert_eq!(s.sample_physical(-1.0), (0.0, 0.0));
        assert_eq!(s.sample_physical(1.0), (0.0, 0.0));
        assert_eq!(s.sample_physical(1.5), (0.0, 0.0));
        for k in 0..50 {
            let x = -0.98 + 0.04 * k as f64;
            let (u, v) = s.sample_physical(x);
            // linear interpolation error <= dy^2/8 * max|u''|
            let tol = (2.0f64 / 64.0).powi(2) / 8.0 * 0.7 * (std::f64::consts::PI / 2.0).powi(2);
            assert!((u - init.u0(x)).abs() <= tol + 1e-15);
            assert!((v - init.v0(x)).abs() <= tol + 1e-15);
        }
    }

    #[test]
    fn midpoint_maps_to_center_node() {
        let p = ModelParams::unit();
        let init = InitialData::cosine(1.0, 1.0).unwrap();
        let mut s = SolverState::initial(&p, &init, 64).unwrap();
        s.g = -3.0;
        s.h = 3.0;
        assert_eq!(s.sample_physical(0.0).0, s.w[32]);
        s.g = -1.0;
        s.h = 5.0;
        assert_eq!(s.sample_physical(2.0).0, s.w[32]);
        assert!((s.x(32) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn nodes_are_antisymmetric() {
        for j in 0..=64 {
            assert_eq!(node(1.3, 64, j), -node(1.3, 64, 64 - j));
        }
    }

    #[test]
    fn mismatched_half_width_rejected() {
        let p = ModelParams::unit();
        let init = InitialData::cosine(1.0, 2.0).unwrap();
        assert!(SolverState::initial(&p, &init, 64).is_err());
    }
}
