use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Shape functions on `[-h0, h0]` that vanish at both ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// `cos(pi x / (2 h0))`, the positive Dirichlet eigenfunction of the interval.
    Cosine,
    /// `cos(pi x / (2 h0)) * (1 + skew * sin(pi x / h0))`; positive for `|skew| < 1`.
    SkewedCosine { skew: f64 },
    /// Values at uniformly spaced nodes from `-h0` to `h0`, linearly interpolated.
    Sampled { values: Vec<f64> },
    /// `factor * base(x)`.
    Scaled { factor: f64, base: Box<Shape> },
}

impl Shape {
    pub fn scaled(self, factor: f64) -> Shape {
        Shape::Scaled {
            factor,
            base: Box::new(self),
        }
    }

    pub fn value(&self, x: f64, h0: f64) -> f64 {
        if x.abs() > h0 {
            return 0.0;
        }
        match self {
            Shape::Cosine => (PI * x / (2.0 * h0)).cos(),
            Shape::SkewedCosine { skew } => {
                (PI * x / (2.0 * h0)).cos() * (1.0 + skew * (PI * x / h0).sin())
            }
            Shape::Sampled { values } => {
                let n = values.len() - 1;
                let s = (x + h0) / (2.0 * h0) * n as f64;
                let k = (s.floor() as usize).min(n - 1);
                let f = s - k as f64;
                values[k] * (1.0 - f) + values[k + 1] * f
            }
            Shape::Scaled { factor, base } => factor * base.value(x, h0),
        }
    }
}

/// Number of sample points used for sup-norms and positivity checks.
const FINE: usize = 4096;

/// Initial data `(u0, v0) = (sigma * phi, sigma * psi)` on `[-h0, h0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialData {
    pub sigma: f64,
    pub phi: Shape,
    pub psi: Shape,
    pub h0: f64,
}

impl InitialData {
    pub fn new(sigma: f64, phi: Shape, psi: Shape, h0: f64) -> Result<Self> {
        let init = Self { sigma, phi, psi, h0 };
        init.validate()?;
        Ok(init)
    }

    /// `phi = psi = cos(pi x / (2 h0))`.
    pub fn cosine(sigma: f64, h0: f64) -> Result<Self> {
        Self::new(sigma, Shape::Cosine, Shape::Cosine, h0)
    }

    pub fn with_sigma(&self, sigma: f64) -> Self {
        Self {
            sigma,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma >= 0.0) {
            return Err(Error::InvalidInitialData(format!(
                "sigma must be finite and non-negative (got {})",
                self.sigma
            )));
        }
        if !(self.h0.is_finite() && self.h0 > 0.0) {
            return Err(Error::InvalidInitialData(format!("h0 must be positive (got {})", self.h0)));
        }
        for (name, shape) in [("phi", &self.phi), ("psi", &self.psi)] {
            check_shape(name, shape, self.h0)?;
        }
        Ok(())
    }

    pub fn u0(&self, x: f64) -> f64 {
        self.sigma * self.phi.value(x, self.h0)
    }

    pub fn v0(&self, x: f64) -> f64 {
        self.sigma * self.psi.value(x, self.h0)
    }

    fn fine_nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let h0 = self.h0;
        (0..=FINE).map(move |k| -h0 + 2.0 * h0 * k as f64 / FINE as f64)
    }

    pub fn sup_u0(&self) -> f64 {
        self.fine_nodes().map(|x| self.u0(x)).fold(0.0, f64::max)
    }

    pub fn sup_v0(&self) -> f64 {
        self.fine_nodes().map(|x| self.v0(x)).fold(0.0, f64::max)
    }

    /// Discrete `sup|u0| + sup|u0'|` on a fine grid.
    pub fn c1_norm_u0(&self) -> f64 {
        let dx = 2.0 * self.h0 / FINE as f64;
        let vals: Vec<f64> = self.fine_nodes().map(|x| self.u0(x)).collect();
        let slope = vals
            .windows(2)
            .map(|w| ((w[1] - w[0]) / dx).abs())
            .fold(0.0, f64::max);
        self.sup_u0() + slope
    }
}

fn check_shape(name: &str, shape: &Shape, h0: f64) -> Result<()> {
    if let Shape::Sampled { values } = shape {
        if values.len() < 3 {
            return Err(Error::InvalidInitialData(format!(
                "{name}: sampled shape needs at least 3 values"
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInitialData(format!("{name}: non-finite sample")));
        }
    }
    let scale = (0..=FINE)
        .map(|k| shape.value(-h0 + 2.0 * h0 * k as f64 / FINE as f64, h0).abs())
        .fold(0.0, f64::max)
        .max(1.0);
    for end in [-h0, h0] {
        let v = shape.value(end, h0);
        if v.abs() > 1e-12 * scale {
            return Err(Error::InvalidInitialData(format!(
                "{name}({end}) = {v:e}; shapes must vanish at both ends"
            )));
        }
    }
    // Sampled shapes are only checked at interior nodes of their own grid.
    let interior: Vec<f64> = match shape {
        Shape::Sampled { values } => {
            let n = values.len() - 1;
            (1..n).map(|k| -h0 + 2.0 * h0 * k as f64 / n as f64).collect()
        }
        _ => (1..FINE).map(|k| -h0 + 2.0 * h0 * k as f64 / FINE as f64).collect(),
    };
    if let Some(x) = interior.into_iter().find(|&x| !(shape.value(x, h0) > 0.0)) {
        return Err(Error::InvalidInitialData(format!(
            "{name} must be positive inside (-h0, h0); fails at x = {x}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_data_is_valid_and_normalised() {
        let init = InitialData::cosine(0.5, 2.0).unwrap();
        assert!((init.sup_u0() - 0.5).abs() < 1e-12);
        assert!((init.sup_v0() - 0.5).abs() < 1e-12);
        // sup |u0'| = sigma * pi / (2 h0)
        let expect = 0.5 + 0.5 * PI / 4.0;
        assert!((init.c1_norm_u0() - expect).abs() < 1e-3);
    }

    #[test]
    fn skewed_hump_is_valid() {
        let init = InitialData::new(1.0, Shape::SkewedCosine { skew: 0.5 }, Shape::Cosine, 1.0);
        assert!(init.is_ok());
        assert!(InitialData::new(1.0, Shape::SkewedCosine { skew: 1.5 }, Shape::Cosine, 1.0).is_err());
    }

    #[test]
    fn rejects_bad_shapes() {
        let bad_end = Shape::Sampled {
            values: vec![0.1, 1.0, 0.0],
        };
        assert!(InitialData::new(1.0, bad_end, Shape::Cosine, 1.0).is_err());
        let zero_inside = Shape::Sampled {
            values: vec![0.0, 0.0, 1.0, 0.0],
        };
        assert!(InitialData::new(1.0, zero_inside, Shape::Cosine, 1.0).is_err());
        assert!(InitialData::cosine(-1.0, 1.0).is_err());
    }

    #[test]
    fn sampled_shape_interpolates() {
        let s = Shape::Sampled {
            values: vec![0.0, 1.0, 0.0],
        };
        assert_eq!(s.value(0.0, 1.0), 1.0);
        assert_eq!(s.value(0.5, 1.0), 0.5);
        assert_eq!(s.value(-1.0, 1.0), 0.0);
        assert_eq!(Shape::Cosine.scaled(3.0).value(0.0, 1.0), 3.0);
    }
}
