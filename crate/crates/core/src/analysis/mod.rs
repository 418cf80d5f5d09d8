//! A-priori bounds, runtime monitors and the spreading/vanishing classifier.

mod bounds;
mod classify;
mod monitors;

pub use bounds::{bound_certificate, is_invariant_pair, BoundCertificate};
pub use classify::{classify, Classification, ClassifierConfig, Criterion, Verdict};
pub use monitors::{
    equilibrium_convergence, front_monotonicity_violation, mass_balance_residual,
    mass_residual_at, max_center_drift, r0f_monotonicity_violation, symmetry_band_check,
    vanishing_width_bound,
};
