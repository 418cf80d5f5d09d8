//! With fixed small initial data, a faster-moving front (larger mu) turns a
//! vanishing infection into a spreading one.
//!
//! cargo run --release --example mu_threshold

use epifront::prelude::*;

fn main() -> Result<()> {
    let p = ModelParams::unit();
    let g = InfectionResponse::monod(2.0)?;
    let init = InitialData::cosine(0.1, p.h0)?;
    let cfg = SolverConfig::defaults_for(&p);
    let bisect = BisectConfig {
        tol: 2e-2,
        ..Default::default()
    };

    match find_mu_star(&p, &g, &init, &cfg, &bisect)? {
        ThresholdOutcome::NoThreshold { r0 } => println!("R0 = {r0}: no threshold"),
        ThresholdOutcome::Bracket(r) => {
            for probe in &r.probes {
                println!("mu = {:<9.5} {}", probe.value, probe.verdict);
            }
            println!("mu* in [{:.5}, {:.5}] ({:?})", r.lo, r.hi, r.status);
            println!("verdicts monotone in mu: {}", r.monotone);
        }
    }
    Ok(())
}
