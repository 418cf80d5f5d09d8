//! A habitat that starts wider than the critical width: the infection spreads
//! and settles to the endemic equilibrium behind both fronts.
//!
//! cargo run --release --example spreading [out.csv]

use epifront::analysis::equilibrium_convergence;
use epifront::cli::trajectory_csv;
use epifront::model::critical_width;
use epifront::prelude::*;

fn main() -> Result<()> {
    let g = InfectionResponse::monod(2.0)?;
    let h_star = critical_width(&ModelParams::unit(), &g).unwrap();
    let p = ModelParams::unit().with_h0(0.55 * h_star);
    let init = InitialData::cosine(0.5, p.h0)?;

    let mut cfg = SolverConfig::defaults_for(&p);
    cfg.early_stop = false;
    cfg.frame_stride = 5.0;
    cfg.keep_fields = true;
    let out = simulate(&p, &g, &init, &cfg, &Monitors::default())?;

    println!("{:>7} {:>9} {:>9} {:>9} {:>9}", "t", "g", "h", "sup u", "R0f");
    for f in out.trajectory.frames.iter().step_by(4) {
        println!("{:>7.1} {:>9.3} {:>9.3} {:>9.5} {:>9.5}", f.t, f.g, f.h, f.sup_u, f.r0f);
    }
    let c = &out.classification;
    println!("\nverdict: {} ({:?})", c.verdict, c.criterion);
    let (t, err) = *equilibrium_convergence(&out.trajectory, &p, &g, p.h0)?.last().unwrap();
    println!("|u - u*| + |v - v*| on [-h0, h0] at t = {t}: {err:.3e}");

    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, trajectory_csv(&out.trajectory, &p))?;
        println!("trajectory written to {path}");
    }
    Ok(())
}
