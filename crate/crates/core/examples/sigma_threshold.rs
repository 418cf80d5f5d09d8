//! Bisect the critical amplitude sigma* separating vanishing from spreading
//! when the initial habitat is too narrow but R0 > 1.
//!
//! cargo run --release --example sigma_threshold

use epifront::prelude::*;

fn main() -> Result<()> {
    let p = ModelParams::unit();
    let g = InfectionResponse::monod(2.0)?;
    let cfg = SolverConfig::defaults_for(&p);
    let out = find_sigma_star(&p, &g, &Shape::Cosine, &Shape::Cosine, &cfg, &BisectConfig::default())?;

    let Some(r) = out.bracket() else {
        println!("{out:?}");
        return Ok(());
    };
    for probe in &r.probes {
        println!(
            "sigma = {:<10.6} {:<12} t = {:>6.1} width = {:.4}{}",
            probe.value,
            probe.verdict.to_string(),
            probe.final_time,
            probe.final_width,
            if probe.extended { " (extended horizon)" } else { "" }
        );
    }
    println!("\nsigma* in [{:.6}, {:.6}], {:?}, {} simulations", r.lo, r.hi, r.status, r.simulations);
    if let (Some(lo), Some(hi)) = (&r.confirm_lo, &r.confirm_hi) {
        println!("check: {:.5} -> {}, {:.5} -> {}", lo.value, lo.verdict, hi.value, hi.verdict);
    }
    Ok(())
}
