//! A tabulated infection response measured at a few points, checked against
//! the modelling assumptions before use.
//!
//! cargo run --release --example custom_response

use epifront::model::{basic_reproduction_number, default_probe_grid, validate_response};
use epifront::prelude::*;

fn main() -> Result<()> {
    let p = ModelParams::unit();
    // saturating data, roughly 3 z / (1 + 2 z)
    let z = vec![0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
    let gz: Vec<f64> = z.iter().map(|z| 3.0 * z / (1.0 + 2.0 * z)).collect();
    let g = InfectionResponse::tabulated(z, gz)?;

    let report = validate_response(&g, &p, &default_probe_grid(8.0))?;
    for c in &report.checks {
        println!("{:<32} {:<4} {}", c.name, if c.passed { "ok" } else { "FAIL" }, c.detail);
    }
    if !report.passed() {
        return Ok(());
    }

    println!("R0 = {}", basic_reproduction_number(&p, &g));
    let init = InitialData::cosine(0.3, p.h0)?;
    let out = simulate(&p, &g, &init, &SolverConfig::defaults_for(&p), &Monitors::default())?;
    let c = &out.classification;
    println!("{} ({:?}) at t = {:.2}, width {:.4}", c.verdict, c.criterion, c.final_time, c.final_width);
    Ok(())
}
