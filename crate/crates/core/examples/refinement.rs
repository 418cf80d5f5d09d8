//! Grid refinement study: the right front and the mass-balance residual
//! converge at first order when N and dt are refined together.
//!
//! cargo run --release --example refinement

use epifront::oracle::{refinement_study, Scenario};
use epifront::prelude::*;

fn main() -> Result<()> {
    let p = ModelParams::unit();
    let mut solver = SolverConfig::defaults_for(&p);
    solver.n_cells = 64;
    solver.dt_max = 4e-3;
    let scenario = Scenario {
        params: p,
        response: InfectionResponse::monod(2.0)?,
        init: InitialData::cosine(0.5, p.h0)?,
        solver,
        t_end: 1.0,
    };
    let study = refinement_study(&scenario, 4)?;
    println!("{:>6} {:>9} {:>20} {:>14}", "N", "dt", "h(1)", "mass residual");
    for l in &study.levels {
        println!("{:>6} {:>9.2e} {:>20.15} {:>14.4e}", l.n_cells, l.dt_max, l.final_h, l.mass_residual);
    }
    println!("front orders: {:?}", study.front_orders);
    println!("mass orders:  {:?}", study.mass_orders);
    if study.inconclusive {
        println!("(errors not monotone: inconclusive)");
    }
    Ok(())
}
