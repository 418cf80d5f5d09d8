//! Command-line front end: `run`, `threshold`, `sweep` and `validate`.
//!
//! Configurations are TOML with dotted sections (`model.d`, `init.sigma`,
//! `solver.n_cells`, ...); a `summary.json` written by `run` is itself a
//! valid configuration and reproduces the run.

pub mod config;
pub mod svg;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::analysis::{mass_balance_residual, Verdict};
use crate::model::{
    basic_reproduction_number, critical_width, default_probe_grid, endemic_equilibrium,
    free_boundary_reproduction_number, small_data_vanishing_bound, spreading_subsolution_delta,
    validate_response,
};
use crate::solver::{simulate, Trajectory};
use crate::threshold::{find_mu_star, find_sigma_star, sweep, SweepCell, ThresholdOutcome};
use crate::{Error, Result};
pub use config::{LoadedConfig, Resolved, RunConfig, Target};

#[derive(Debug, Parser)]
#[command(name = "epifront", version, about = "Two-front free-boundary epidemic simulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// TOML configuration, or a JSON summary from a previous run.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write SVG plots.
    #[arg(long)]
    pub svg: bool,
    /// Comma-separated times for profile snapshots (overrides `output.profiles`).
    #[arg(long, value_delimiter = ',')]
    pub profiles: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one configuration and classify it.
    Run(Common),
    /// Bracket the sharp threshold in sigma or mu.
    Threshold {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        target: Option<Target>,
    },
    /// Classify every point of the `sweep.*` grid.
    Sweep(Common),
    /// Check the response assumptions and print derived constants and defaults.
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "EPIFRONT_THREADS";

/// Parses arguments, executes, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0);
    let result = match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::Numeric(format!("thread pool: {e}"))),
        },
        None => execute(&cli),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Run(c) => run(c),
        Command::Threshold { common, target } => threshold(common, *target),
        Command::Sweep(c) => sweep_command(c),
        Command::Validate { config } => {
            let loaded = load(config.as_deref())?;
            let (text, passed) = validate_report(&loaded)?;
            print!("{text}");
            Ok(if passed { 0 } else { 1 })
        }
    }
}

fn load(path: Option<&Path>) -> Result<LoadedConfig> {
    match path {
        Some(p) => LoadedConfig::from_path(p),
        None => LoadedConfig::from_toml_str(""),
    }
}

fn prepare(common: &Common) -> Result<(LoadedConfig, PathBuf)> {
    let mut loaded = load(common.config.as_deref())?;
    if common.svg {
        loaded.config.output.svg = true;
    }
    if !common.profiles.is_empty() {
        loaded.config.output.profiles = common.profiles.clone();
    }
    let out = common
        .out
        .clone()
        .or_else(|| loaded.config.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out)?;
    Ok((loaded, out))
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub const TRAJECTORY_HEADER: &str =
    "t,g,h,width,sup_u,sup_v,mass,mass_residual,r0f,g_speed,h_speed";

pub fn trajectory_csv(traj: &Trajectory, p: &crate::model::ModelParams) -> String {
    let residual = mass_balance_residual(traj, p);
    let mut s = String::with_capacity(64 * 11 * traj.frames.len() + 80);
    s.push_str(TRAJECTORY_HEADER);
    s.push('\n');
    for (f, r) in traj.frames.iter().zip(&residual) {
        let row = [
            f.t, f.g, f.h, f.width, f.sup_u, f.sup_v, f.mass, *r, f.r0f, f.g_speed, f.h_speed,
        ];
        let cols: Vec<String> = row.iter().map(|&x| num(x)).collect();
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    s
}

pub fn profiles_csv(traj: &Trajectory) -> String {
    let mut s = String::from("t,x,u,v\n");
    for state in &traj.snapshots {
        for j in 0..=state.n_cells() {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                num(state.t),
                num(state.x(j)),
                num(state.w[j]),
                num(state.z[j])
            );
        }
    }
    s
}

fn write_svgs(out: &Path, traj: &Trajectory) -> Result<()> {
    use svg::{line_plot, Series};
    let pts = |f: fn(&crate::solver::Frame) -> f64| -> Vec<(f64, f64)> {
        traj.frames.iter().map(|fr| (fr.t, f(fr))).collect()
    };
    let fronts = line_plot(
        "Free boundaries",
        "t",
        "x",
        &[
            Series { label: "g(t)", color: "#1f77b4", points: pts(|f| f.g) },
            Series { label: "h(t)", color: "#d62728", points: pts(|f| f.h) },
        ],
    );
    fs::write(out.join("fronts.svg"), fronts)?;
    let norms = line_plot(
        "Sup-norms",
        "t",
        "sup",
        &[
            Series { label: "sup u", color: "#2ca02c", points: pts(|f| f.sup_u) },
            Series { label: "sup v", color: "#9467bd", points: pts(|f| f.sup_v) },
        ],
    );
    fs::write(out.join("sup_norms.svg"), norms)?;
    Ok(())
}

fn derived_constants(r: &Resolved) -> Result<serde_json::Value> {
    let (p, g) = (&r.params, &r.response);
    Ok(json!({
        "r0": basic_reproduction_number(p, g),
        "r0f_initial": free_boundary_reproduction_number(p, g, p.initial_width())?,
        "critical_width": critical_width(p, g),
        "equilibrium": endemic_equilibrium(p, g)?,
    }))
}

fn run(common: &Common) -> Result<i32> {
    let (loaded, out) = prepare(common)?;
    let r = loaded.resolve()?;
    let monitors = loaded.config.monitors;
    let csv_path = out.join("trajectory.csv");
    let outcome = match simulate(&r.params, &r.response, &r.init, &r.solver, &monitors) {
        Ok(o) => o,
        Err(Error::BlowUp { t, detail, partial }) => {
            fs::write(&csv_path, trajectory_csv(&partial, &r.params))?;
            let last = partial.last().map_or(0.0, |f| f.t);
            eprintln!(
                "error: blow-up at t = {t}: {detail}\nlast good frame t = {last} written to {}",
                csv_path.display()
            );
            return Ok(2);
        }
        Err(e) => return Err(e),
    };
    let traj = &outcome.trajectory;
    fs::write(&csv_path, trajectory_csv(traj, &r.params))?;
    if !loaded.config.output.profiles.is_empty() {
        fs::write(out.join("profiles.csv"), profiles_csv(traj))?;
    }
    if loaded.config.output.svg {
        write_svgs(&out, traj)?;
    }
    let summary = json!({
        "verdict": outcome.classification.verdict,
        "classification": outcome.classification,
        "certificate": outcome.certificate,
        "monitors": outcome.monitors,
        "derived": derived_constants(&r)?,
        "response": r.response.label(),
        "steps": traj.steps,
        "frames": traj.frames.len(),
        "config": loaded.explicit(&r),
    });
    fs::write(out.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
    let c = &outcome.classification;
    println!(
        "{} ({:?}) at t = {:.4}, width {:.6}; outputs in {}",
        c.verdict,
        c.criterion,
        c.final_time,
        c.final_width,
        out.display()
    );
    Ok(0)
}

fn threshold(common: &Common, target: Option<Target>) -> Result<i32> {
    let (loaded, out) = prepare(common)?;
    let r = loaded.resolve()?;
    let section = &loaded.config.threshold;
    let target = target.unwrap_or(section.target);
    let outcome = match target {
        Target::Sigma => find_sigma_star(
            &r.params,
            &r.response,
            &r.init.phi,
            &r.init.psi,
            &r.solver,
            &section.bisect,
        )?,
        Target::Mu => find_mu_star(&r.params, &r.response, &r.init, &r.solver, &section.bisect)?,
    };
    let doc = json!({
        "target": target,
        "result": outcome,
        "derived": derived_constants(&r)?,
        "config": loaded.explicit(&r),
    });
    fs::write(out.join("threshold.json"), serde_json::to_string_pretty(&doc)?)?;
    match &outcome {
        ThresholdOutcome::NoThreshold { r0 } => {
            println!("no threshold: R0 = {r0} <= 1, every run vanishes")
        }
        ThresholdOutcome::Bracket(b) => println!(
            "{:?}* in [{}, {}] ({:?}, {} simulations)",
            target, b.lo, b.hi, b.status, b.simulations
        ),
    }
    Ok(0)
}

pub const SWEEP_HEADER: &str =
    "sigma,mu,d,verdict,criterion,final_time,final_width,final_sup_u,final_sup_v,error";

pub fn sweep_csv(cells: &[SweepCell]) -> String {
    let mut s = String::from(SWEEP_HEADER);
    s.push('\n');
    for c in cells {
        let head = format!("{},{},{}", num(c.sigma), num(c.mu), num(c.d));
        match &c.result {
            Ok(r) => {
                let criterion = serde_json::to_value(r.criterion)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default();
                let _ = writeln!(
                    s,
                    "{head},{},{criterion},{},{},{},{},",
                    r.verdict,
                    num(r.final_time),
                    num(r.final_width),
                    num(r.final_sup_u),
                    num(r.final_sup_v)
                );
            }
            Err(e) => {
                let _ = writeln!(s, "{head},error,,,,,,\"{}\"", e.replace('"', "'"));
            }
        }
    }
    s
}

fn sweep_svg(cells: &[SweepCell]) -> String {
    let mut xs: Vec<f64> = cells.iter().map(|c| c.sigma).collect();
    let mut mus: Vec<f64> = cells.iter().map(|c| c.mu).collect();
    let mut ds: Vec<f64> = cells.iter().map(|c| c.d).collect();
    for v in [&mut xs, &mut mus, &mut ds] {
        v.sort_by(f64::total_cmp);
        v.dedup();
    }
    let (ys, ylabel, use_mu) = if mus.len() >= ds.len() {
        (mus, "mu", true)
    } else {
        (ds, "d", false)
    };
    let colour = |c: &SweepCell| match &c.result {
        Ok(r) => match r.verdict {
            Verdict::Spreading => "#d62728",
            Verdict::Vanishing => "#1f77b4",
            Verdict::Undetermined => "#bbbbbb",
        },
        Err(_) => "#000000",
    };
    let grid: Vec<Vec<&str>> = ys
        .iter()
        .map(|&y| {
            xs.iter()
                .map(|&x| {
                    cells
                        .iter()
                        .find(|c| c.sigma == x && (if use_mu { c.mu } else { c.d }) == y)
                        .map_or("#ffffff", colour)
                })
                .collect()
        })
        .collect();
    svg::heatmap(
        "Phase diagram",
        "sigma",
        ylabel,
        &xs,
        &ys,
        &grid,
        &[
            ("spreading", "#d62728"),
            ("vanishing", "#1f77b4"),
            ("undetermined", "#bbbbbb"),
            ("error", "#000000"),
        ],
    )
}

fn sweep_command(common: &Common) -> Result<i32> {
    let (loaded, out) = prepare(common)?;
    let r = loaded.resolve()?;
    let cells = sweep(
        &r.params,
        &r.response,
        &r.init,
        &loaded.config.sweep,
        &r.solver,
        &loaded.config.monitors,
    );
    fs::write(out.join("sweep.csv"), sweep_csv(&cells))?;
    if loaded.config.output.svg && !cells.is_empty() {
        fs::write(out.join("sweep.svg"), sweep_svg(&cells))?;
    }
    let failed = cells.iter().filter(|c| c.result.is_err()).count();
    println!("{} cells ({failed} failed); table in {}", cells.len(), out.display());
    Ok(0)
}

/// Human-readable assumption report, derived constants and the fully
/// explicit configuration. The flag is true iff every assumption holds.
pub fn validate_report(loaded: &LoadedConfig) -> Result<(String, bool)> {
    let r = loaded.resolve()?;
    let (p, g) = (&r.params, &r.response);
    let report = validate_response(g, p, &default_probe_grid(1.0))?;
    let mut s = String::new();
    let _ = writeln!(s, "response: {}", g.label());
    let _ = writeln!(
        s,
        "probes: {} points on [{:e}, {:e}]",
        report.probe_count, report.probe_min, report.probe_max
    );
    for c in &report.checks {
        let status = if c.passed { "ok  " } else { "FAIL" };
        let witness = c.witness.map(|w| format!(" (z = {w:e})")).unwrap_or_default();
        let _ = writeln!(s, "[{status}] {}{witness}: {}", c.name, c.detail);
    }
    if report.heuristic_derivative {
        let _ = writeln!(s, "note: G' not known to be monotone; certificates are sampled");
    }
    let _ = writeln!(s, "R0 = {}", basic_reproduction_number(p, g));
    let _ = writeln!(
        s,
        "R0f(0) = {}",
        free_boundary_reproduction_number(p, g, p.initial_width())?
    );
    match critical_width(p, g) {
        Some(h) => {
            let _ = writeln!(s, "critical width h* = {h}");
        }
        None => {
            let _ = writeln!(s, "critical width h* = absent");
        }
    }
    match endemic_equilibrium(p, g)? {
        Some(e) => {
            let _ = writeln!(s, "equilibrium (u*, v*) = ({}, {})", e.u, e.v);
        }
        None => {
            let _ = writeln!(s, "equilibrium (u*, v*) = absent");
        }
    }
    if report.passed() {
        match small_data_vanishing_bound(p, g)? {
            Some(b) => {
                let _ = writeln!(
                    s,
                    "small-data bound: delta = {}, epsilon = {} (sup u0 <= {}, sup v0 <= {})",
                    b.delta, b.epsilon, b.u_sup_max, b.v_sup_max
                );
            }
            None => {
                let _ = writeln!(s, "small-data bound: not defined");
            }
        }
        match spreading_subsolution_delta(p, g)? {
            Some(d) => {
                let _ = writeln!(s, "spreading subsolution: delta = {} (v factor {})", d.delta, d.v_factor);
            }
            None => {
                let _ = writeln!(s, "spreading subsolution: not defined");
            }
        }
    }
    let explicit = toml::to_string(&loaded.explicit(&r))
        .map_err(|e| Error::Numeric(format!("serializing defaults: {e}")))?;
    let _ = writeln!(s, "\n# effective configuration\n{explicit}");
    let _ = writeln!(s, "assumptions: {}", if report.passed() { "pass" } else { "FAIL" });
    Ok((s, report.passed()))
}
