//! Phase diagram over (sigma, mu), run in parallel and written as CSV + SVG.
//!
//! cargo run --release --example phase_sweep [out_dir]

use std::path::PathBuf;

use epifront::analysis::Verdict;
use epifront::cli::sweep_csv;
use epifront::prelude::*;

fn main() -> Result<()> {
    let p = ModelParams::unit();
    let g = InfectionResponse::monod(2.0)?;
    let init = InitialData::cosine(1.0, p.h0)?;
    let mut cfg = SolverConfig::defaults_for(&p);
    cfg.n_cells = 128;

    let geometric = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
    };
    let grid = SweepGrid {
        sigma: Some(geometric(0.02, 0.5, 8)),
        mu: Some(geometric(0.25, 4.0, 6)),
        d: None,
    };
    let cells = sweep(&p, &g, &init, &grid, &cfg, &Monitors::default());

    for row in cells.chunks(8).rev() {
        let line: String = row
            .iter()
            .map(|c| match c.result.as_ref().map(|r| r.verdict) {
                Ok(Verdict::Spreading) => 'S',
                Ok(Verdict::Vanishing) => '.',
                Ok(Verdict::Undetermined) => '?',
                Err(_) => 'x',
            })
            .collect();
        println!("mu = {:>6.3} | {line}", row[0].mu);
    }
    println!("             sigma ->");

    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "phase_sweep".into()));
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("sweep.csv"), sweep_csv(&cells))?;
    println!("table written to {}", dir.join("sweep.csv").display());
    Ok(())
}
