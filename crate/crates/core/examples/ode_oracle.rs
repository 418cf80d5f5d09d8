//! The spatially homogeneous ODE as an upper solution, and the discrete
//! eigenvalue check behind the reproduction number.
//!
//! cargo run --release --example ode_oracle

use epifront::oracle::{dominance_check, eigen_check, ode_solve};
use epifront::prelude::*;

fn main() -> Result<()> {
    let p = ModelParams::unit();
    for a21 in [0.5, 2.0, 4.0] {
        let g = InfectionResponse::monod(a21)?;
        let (t, u, v) = ode_solve(&p, &g, 1.0, 1.0, 100.0, 1e-3)?.last();
        println!("a21 = {a21}: ODE at t = {t} is ({u:.6}, {v:.6})");
    }

    let g = InfectionResponse::monod(2.0)?;
    let init = InitialData::new(1.5, Shape::SkewedCosine { skew: 0.5 }, Shape::Cosine, p.h0)?;
    let mut cfg = SolverConfig::defaults_for(&p);
    cfg.t_max = 30.0;
    cfg.early_stop = false;
    let out = simulate(&p, &g, &init, &cfg, &Monitors::default())?;
    let ode = ode_solve(&p, &g, init.sup_u0(), init.sup_v0(), cfg.t_max, 1e-3)?;
    println!("\nPDE excess over ODE upper solution: {:e}", dominance_check(&out.trajectory, &ode, 0.0));

    println!("\n{:>6} {:>14} {:>12}", "N", "discrepancy", "ratio");
    let mut prev: Option<f64> = None;
    for n in [32, 64, 128, 256, 512] {
        let e = eigen_check(&p, &g, std::f64::consts::PI, n)?;
        let ratio = prev.map(|q| q / e.discrepancy).unwrap_or(f64::NAN);
        println!("{n:>6} {:>14.4e} {ratio:>12.4}", e.discrepancy);
        prev = Some(e.discrepancy);
    }
    Ok(())
}
