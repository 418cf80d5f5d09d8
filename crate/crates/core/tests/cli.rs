use std::fs;
use std::path::Path;

use epifront::cli::{execute, main_with_args, validate_report, Cli, LoadedConfig, SWEEP_HEADER};
use clap::Parser;

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn epifront(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("epifront").chain(args.iter().copied()))
}

const QUICK: &str = "solver.n_cells = 64\nsolver.t_max = 20.0\n";

#[test]
fn run_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", &format!("{QUICK}init.sigma = 0.3\n"));
    let out = dir.path().join("out");
    let code = epifront(&[
        "run", "--config", &cfg, "--out", out.to_str().unwrap(), "--svg", "--profiles", "0,0.5",
    ]);
    assert_eq!(code, 0);
    for f in ["trajectory.csv", "summary.json", "profiles.csv", "fronts.svg", "sup_norms.svg"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let verdict = summary["verdict"].as_str().unwrap();
    assert!(["spreading", "vanishing", "undetermined"].contains(&verdict));
    assert!(summary["certificate"]["c1"].as_f64().unwrap() > 0.0);
    assert_eq!(summary["derived"]["r0"].as_f64().unwrap(), 2.0);

    let profiles = fs::read_to_string(out.join("profiles.csv")).unwrap();
    // header + 2 snapshots of 65 nodes
    assert_eq!(profiles.lines().count(), 1 + 2 * 65);
    let traj = fs::read_to_string(out.join("trajectory.csv")).unwrap();
    let header = traj.lines().next().unwrap();
    assert_eq!(header, "t,g,h,width,sup_u,sup_v,mass,mass_residual,r0f,g_speed,h_speed");
    let row: Vec<&str> = traj.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row.len(), 11);
    // 17 significant digits
    assert_eq!(row[1].split('e').next().unwrap().trim_start_matches('-').len(), 18);
}

#[test]
fn runs_are_byte_identical_and_reproducible_from_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", &format!("{QUICK}init.sigma = 0.12\nmodel.mu = 0.7\n"));
    let (a, b, c) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    assert_eq!(epifront(&["run", "--config", &cfg, "--out", a.to_str().unwrap()]), 0);
    assert_eq!(epifront(&["run", "--config", &cfg, "--out", b.to_str().unwrap()]), 0);
    let summary = a.join("summary.json");
    assert_eq!(
        epifront(&["run", "--config", summary.to_str().unwrap(), "--out", c.to_str().unwrap()]),
        0
    );
    let ta = fs::read(a.join("trajectory.csv")).unwrap();
    assert_eq!(ta, fs::read(b.join("trajectory.csv")).unwrap());
    assert_eq!(ta, fs::read(c.join("trajectory.csv")).unwrap());
}

#[test]
fn invalid_parameter_fails_naming_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "[model]\nd = 1.0\na11 = -1.0\n");
    let out = dir.path().join("o");
    assert_ne!(epifront(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]), 0);
    let cli = Cli::parse_from(["epifront", "run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let msg = execute(&cli).unwrap_err().to_string();
    assert!(msg.contains("a11") && msg.contains("line 3"), "{msg}");
}

#[test]
fn threshold_degenerate_and_absent() {
    let dir = tempfile::tempdir().unwrap();
    let wide = write(dir.path(), "w.toml", &format!("{QUICK}model.h0 = 1.7278759594743862\n"));
    let out = dir.path().join("w");
    assert_eq!(epifront(&["threshold", "--config", &wide, "--out", out.to_str().unwrap()]), 0);
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("threshold.json")).unwrap()).unwrap();
    assert_eq!(doc["result"]["outcome"], "bracket");
    assert_eq!(doc["result"]["lo"].as_f64(), Some(0.0));
    assert_eq!(doc["result"]["hi"].as_f64(), Some(0.0));
    assert_eq!(doc["result"]["status"]["status"], "degenerate");

    let low = write(dir.path(), "l.toml", &format!("{QUICK}response.a21 = 0.8\n"));
    let out = dir.path().join("l");
    assert_eq!(
        epifront(&["threshold", "--config", &low, "--out", out.to_str().unwrap(), "--target", "mu"]),
        0
    );
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("threshold.json")).unwrap()).unwrap();
    assert_eq!(doc["result"]["outcome"], "no_threshold");
    assert_eq!(doc["target"], "mu");
}

#[test]
fn threshold_embeds_confirmations() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "solver.n_cells = 32\nthreshold.bisect.tol = 0.1\n",
    );
    let out = dir.path().join("t");
    assert_eq!(epifront(&["threshold", "--config", &cfg, "--out", out.to_str().unwrap()]), 0);
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("threshold.json")).unwrap()).unwrap();
    let r = &doc["result"];
    assert_eq!(r["status"]["status"], "converged");
    assert_eq!(r["confirm_lo"]["verdict"], "vanishing");
    assert_eq!(r["confirm_hi"]["verdict"], "spreading");
    assert!(r["probes"].as_array().unwrap().len() >= 3);
}

#[test]
fn sweep_tables() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "e.toml", "sweep.sigma = []\n");
    let out = dir.path().join("e");
    assert_eq!(epifront(&["sweep", "--config", &empty, "--out", out.to_str().unwrap()]), 0);
    assert_eq!(
        fs::read_to_string(out.join("sweep.csv")).unwrap(),
        format!("{SWEEP_HEADER}\n")
    );

    let grid = write(
        dir.path(),
        "g.toml",
        "solver.n_cells = 64\nsweep.sigma = [0.05, 0.1, 0.3, 0.6]\nsweep.mu = [1.0, 2.0]\n",
    );
    let out = dir.path().join("g");
    assert_eq!(epifront(&["sweep", "--config", &grid, "--out", out.to_str().unwrap(), "--svg"]), 0);
    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let rows: Vec<Vec<String>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 8);
    // ascending sigma at fixed mu: once spreading, always spreading
    for mu_rows in rows.chunks(4) {
        let first_spread = mu_rows.iter().position(|r| r[3] == "spreading");
        if let Some(k) = first_spread {
            assert!(mu_rows[k..].iter().all(|r| r[3] == "spreading"), "{mu_rows:?}");
        }
    }
    assert!(fs::read_to_string(out.join("sweep.svg")).unwrap().contains("<svg"));
}

#[test]
fn single_cell_sweep_matches_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", &format!("{QUICK}init.sigma = 0.3\n"));
    let (s, r) = (dir.path().join("s"), dir.path().join("r"));
    assert_eq!(epifront(&["sweep", "--config", &cfg, "--out", s.to_str().unwrap()]), 0);
    assert_eq!(epifront(&["run", "--config", &cfg, "--out", r.to_str().unwrap()]), 0);
    let row = fs::read_to_string(s.join("sweep.csv")).unwrap();
    let row: Vec<String> = row.lines().nth(1).unwrap().split(',').map(String::from).collect();
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(r.join("summary.json")).unwrap()).unwrap();
    assert_eq!(row[3], summary["verdict"].as_str().unwrap());
    let width: f64 = row[6].parse().unwrap();
    assert_eq!(width, summary["classification"]["final_width"].as_f64().unwrap());
}

#[test]
fn validate_reports() {
    let ok = LoadedConfig::from_toml_str("").unwrap();
    let (text, passed) = validate_report(&ok).unwrap();
    assert!(passed);
    for needle in ["R0 = 2", "R0f(0)", "critical width", "equilibrium", "small-data bound", "n_cells = 256"] {
        assert!(text.contains(needle), "missing {needle}:\n{text}");
    }

    let steep = LoadedConfig::from_toml_str("response.kind = \"linear\"\nresponse.slope = 1.5\n").unwrap();
    let (text, passed) = validate_report(&steep).unwrap();
    assert!(!passed);
    assert!(text.contains("[FAIL] lim G(z)/z") && text.contains("(z = "), "{text}");

    let low = LoadedConfig::from_toml_str("response.a21 = 0.8\n").unwrap();
    let (text, _) = validate_report(&low).unwrap();
    assert!(text.contains("critical width h* = absent"));
    assert!(text.contains("equilibrium (u*, v*) = absent"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", "response.kind = \"linear\"\nresponse.slope = 1.5\n");
    assert_eq!(epifront(&["validate", "--config", &cfg]), 1);
}
