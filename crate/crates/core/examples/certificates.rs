//! Explicit certificates: an amplitude small enough to guarantee vanishing,
//! and a stationary lower solution that guarantees spreading.
//!
//! cargo run --release --example certificates

use epifront::model::{critical_width, small_data_vanishing_bound, spreading_subsolution_delta};
use epifront::prelude::*;

fn main() -> Result<()> {
    let g = InfectionResponse::monod(2.0)?;
    let narrow = ModelParams::unit();
    if let Some(b) = small_data_vanishing_bound(&narrow, &g)? {
        println!("narrow habitat: delta = {:.4}, epsilon = {:.4e}", b.delta, b.epsilon);
        let init = InitialData::new(0.5 * b.epsilon, Shape::Cosine, Shape::Cosine.scaled(b.v_factor), narrow.h0)?;
        let out = simulate(&narrow, &g, &init, &SolverConfig::defaults_for(&narrow), &Monitors::default())?;
        println!("  data at half the bound: {}", out.classification.verdict);
    }

    let h_star = critical_width(&narrow, &g).unwrap();
    let wide = narrow.with_h0(0.55 * h_star);
    if let Some(s) = spreading_subsolution_delta(&wide, &g)? {
        println!("wide habitat: lower-solution amplitude delta = {:.4e}", s.delta);
        let init = InitialData::new(s.delta, Shape::Cosine, Shape::Cosine.scaled(s.v_factor), wide.h0)?;
        let out = simulate(&wide, &g, &init, &SolverConfig::defaults_for(&wide), &Monitors::default())?;
        println!("  data at the lower solution: {}", out.classification.verdict);
    }

    let init = InitialData::cosine(2.0, narrow.h0)?;
    let cert = bound_certificate(&narrow, &g, &init)?;
    println!(
        "a-priori bounds for sigma = 2: C1 = {:.4}, C2 = {:.4}, C3 = {:.4} (M = {:.4})",
        cert.c1, cert.c2, cert.c3, cert.m
    );
    Ok(())
}
