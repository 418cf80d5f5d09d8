use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Constants of the free-boundary problem.
///
/// `d` diffusion rate of the bacteria, `a11` bacterial decay rate, `a12`
/// infective-to-bacteria production factor, `a22` recovery rate of infectives,
/// `mu` front-response coefficient of the Stefan conditions, `h0` initial
/// half-width of the infected habitat.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub d: f64,
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
    pub mu: f64,
    pub h0: f64,
}

impl ModelParams {
    pub fn new(d: f64, a11: f64, a12: f64, a22: f64, mu: f64, h0: f64) -> Result<Self> {
        let p = Self {
            d,
            a11,
            a12,
            a22,
            mu,
            h0,
        };
        p.validate()?;
        Ok(p)
    }

    /// All rates equal to one, `mu = 1`, `h0 = 1`.
    pub fn unit() -> Self {
        Self {
            d: 1.0,
            a11: 1.0,
            a12: 1.0,
            a22: 1.0,
            mu: 1.0,
            h0: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.named_fields() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite and strictly positive",
                });
            }
        }
        Ok(())
    }

    pub fn named_fields(&self) -> [(&'static str, f64); 6] {
        [
            ("d", self.d),
            ("a11", self.a11),
            ("a12", self.a12),
            ("a22", self.a22),
            ("mu", self.mu),
            ("h0", self.h0),
        ]
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_h0(mut self, h0: f64) -> Self {
        self.h0 = h0;
        self
    }

    pub fn with_d(mut self, d: f64) -> Self {
        self.d = d;
        self
    }

    /// Slope bound `a11 a22 / a12` that the asymptotic ratio `G(z)/z` must stay below.
    pub fn slope_cap(&self) -> f64 {
        self.a11 * self.a22 / self.a12
    }

    /// Initial habitat width `2 h0`.
    pub fn initial_width(&self) -> f64 {
        2.0 * self.h0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_fields() {
        let err = ModelParams::new(1.0, -1.0, 1.0, 1.0, 1.0, 1.0).unwrap_err();
        assert!(err.to_string().contains("a11"), "{err}");
        assert!(ModelParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).is_ok());
    }
}
