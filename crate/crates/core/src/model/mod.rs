//! Parameters, the infection response and closed-form quantities.

mod certificates;
mod initial;
mod params;
mod quantities;
mod response;
pub mod roots;

pub use certificates::{
    small_data_vanishing_bound, spreading_subsolution_delta, SmallDataBound, SubsolutionDelta,
};
pub use initial::{InitialData, Shape};
pub use params::ModelParams;
pub use quantities::{
    basic_reproduction_number, critical_width, endemic_equilibrium,
    free_boundary_reproduction_number, principal_eigenvalue, Equilibrium,
};
pub use response::{
    default_probe_grid, validate_response, AssumptionCheck, InfectionResponse, ResponseKind,
    ResponseReport,
};
