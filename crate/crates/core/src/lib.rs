//! Simulation of a bacteria/infective epidemic model on an interval whose two
//! ends move by Stefan conditions.
//!
//! The crate is organised around the life cycle of a study:
//!
//! * [`model`] holds parameters, the infection response `G`, and closed-form
//!   quantities (reproduction numbers, principal eigenvalue, critical width,
//!   endemic equilibrium, small/large-data certificates).
//! * [`solver`] integrates the front-fixed system on a uniform grid with an
//!   IMEX scheme and evolves both fronts.
//! * [`analysis`] provides a-priori bounds, runtime monitors and the
//!   spreading/vanishing classifier.
//! * [`threshold`] brackets the sharp thresholds in the initial-data scale and
//!   in the front-response coefficient, and runs parameter sweeps.
//! * [`oracle`] contains independent references (spatially homogeneous ODE,
//!   discrete eigenvalue checks, refinement studies).
//! * [`cli`] reads run configurations and writes CSV/JSON/SVG outputs.
//!
//! ```no_run
//! use epifront::prelude::*;
//!
//! let params = ModelParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
//! let response = InfectionResponse::monod(2.0).unwrap();
//! let init = InitialData::cosine(0.5, params.h0).unwrap();
//! let config = SolverConfig::defaults_for(&params);
//! let outcome = simulate(&params, &response, &init, &config, &Monitors::default()).unwrap();
//! println!("{:?}", outcome.classification.verdict);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
mod error;
pub mod model;
pub mod oracle;
pub mod solver;
pub mod threshold;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::analysis::{
        bound_certificate, classify, BoundCertificate, Classification, ClassifierConfig, Verdict,
    };
    pub use crate::model::{InfectionResponse, InitialData, ModelParams, ResponseKind, Shape};
    pub use crate::solver::{
        simulate, Monitors, SimulationOutcome, SolverConfig, SolverState, Trajectory,
    };
    pub use crate::threshold::{
        find_mu_star, find_sigma_star, sweep, BisectConfig, SweepGrid, ThresholdOutcome,
    };
    pub use crate::{Error, Result};
}
