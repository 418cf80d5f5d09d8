//! Subcritical transmission (R0 < 1): the infection dies out and the habitat
//! stops growing below the explicit width bound.
//!
//! cargo run --release --example vanishing

use epifront::analysis::{mass_balance_residual, vanishing_width_bound};
use epifront::model::basic_reproduction_number;
use epifront::prelude::*;

fn main() -> Result<()> {
    let p = ModelParams::unit();
    let g = InfectionResponse::monod(0.8)?;
    println!("R0 = {}", basic_reproduction_number(&p, &g));

    let init = InitialData::cosine(1.0, p.h0)?;
    let out = simulate(&p, &g, &init, &SolverConfig::defaults_for(&p), &Monitors::default())?;
    let traj = &out.trajectory;
    let c = &out.classification;

    println!("verdict {} at t = {:.2} after {} steps", c.verdict, c.final_time, traj.steps);
    println!(
        "final width {:.5}, bound 2 h0 + (mu/d) M(0) = {:.5}",
        c.final_width,
        vanishing_width_bound(traj, &p).unwrap()
    );
    println!("sup u = {:.3e}, sup v = {:.3e}", c.final_sup_u, c.final_sup_v);
    let worst = mass_balance_residual(traj, &p)
        .into_iter()
        .fold(0.0f64, |m, r| m.max(r.abs()));
    println!("largest mass-balance residual {worst:.3e}");
    if let Some(cert) = out.certificate {
        println!("certified bounds C1 = {:.4}, C2 = {:.4}, C3 = {:.4}", cert.c1, cert.c2, cert.c3);
    }
    Ok(())
}
