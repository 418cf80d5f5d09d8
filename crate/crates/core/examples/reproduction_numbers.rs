//! Closed-form thresholds for a Monod response as the habitat widens.
//!
//! cargo run --example reproduction_numbers

use epifront::model::{
    basic_reproduction_number, critical_width, default_probe_grid, endemic_equilibrium,
    free_boundary_reproduction_number, principal_eigenvalue, validate_response,
};
use epifront::prelude::*;

fn main() -> Result<()> {
    let p = ModelParams::unit();
    let g = InfectionResponse::monod(2.0)?;

    let report = validate_response(&g, &p, &default_probe_grid(1.0))?;
    for c in &report.checks {
        println!("{:<32} {}", c.name, if c.passed { "ok" } else { "FAIL" });
    }

    println!("R0 = {}", basic_reproduction_number(&p, &g));
    if let Some(h) = critical_width(&p, &g) {
        println!("critical width h* = {h:.6}");
    }
    if let Some(eq) = endemic_equilibrium(&p, &g)? {
        println!("endemic equilibrium (u*, v*) = ({:.6}, {:.6})", eq.u, eq.v);
    }

    println!("\n{:>8} {:>10} {:>10}", "width", "R0f", "lambda0");
    for width in [0.5, 1.0, 2.0, std::f64::consts::PI, 5.0, 10.0, 50.0] {
        let r0f = free_boundary_reproduction_number(&p, &g, width)?;
        let lambda = principal_eigenvalue(&p, &g, width)?;
        println!("{width:>8.3} {r0f:>10.5} {lambda:>10.5}");
    }
    Ok(())
}
