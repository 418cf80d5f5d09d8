use epifront::analysis::bound_certificate;
use epifront::model::{InfectionResponse, InitialData, ModelParams};
use epifront::oracle::{dominance_check, ode_solve, refinement_study, Scenario};
use epifront::solver::{simulate, Monitors, SolverConfig};

fn scenario(sigma: f64) -> Scenario {
    let p = ModelParams::unit();
    let mut solver = SolverConfig::defaults_for(&p);
    solver.n_cells = 64;
    solver.dt_max = 4e-3;
    Scenario {
        params: p,
        response: InfectionResponse::monod(2.0).unwrap(),
        init: InitialData::cosine(sigma, 1.0).unwrap(),
        solver,
        t_end: 1.0,
    }
}

#[test]
fn refinement_orders_are_first_order() {
    let study = refinement_study(&scenario(0.5), 3).unwrap();
    assert!(!study.inconclusive);
    let front = study.front_orders[0];
    assert!((0.8..=1.5).contains(&front), "front order {front}");
    assert!(study.mass_orders.iter().all(|&o| o >= 0.8), "{:?}", study.mass_orders);
}

#[test]
fn refinement_of_zero_solution_has_zero_differences() {
    let study = refinement_study(&scenario(0.0), 3).unwrap();
    assert!(study.levels.iter().all(|l| l.final_h == 1.0 && l.mass_residual == 0.0));
    assert!(!study.inconclusive);
    assert!(refinement_study(&scenario(0.5), 2).is_err());
}

#[test]
fn dominance_detects_corruption() {
    let p = ModelParams::unit();
    let g = InfectionResponse::monod(2.0).unwrap();
    let init = InitialData::cosine(0.8, 1.0).unwrap();
    let mut cfg = SolverConfig::defaults_for(&p);
    cfg.n_cells = 64;
    cfg.t_max = 10.0;
    cfg.early_stop = false;
    let out = simulate(&p, &g, &init, &cfg, &Monitors::default()).unwrap();
    let cert = bound_certificate(&p, &g, &init).unwrap();
    let ode = ode_solve(&p, &g, init.sup_u0(), init.sup_v0(), 10.0, 1e-3).unwrap();
    let tol = 1e-6 * (cert.c1 + cert.c2);
    assert_eq!(dominance_check(&out.trajectory, &ode, tol), 0.0);

    let mut bad = out.trajectory.clone();
    bad.frames[5].sup_u += cert.c1;
    assert!(dominance_check(&bad, &ode, tol) > 0.5 * cert.c1);

    let zero = simulate(&p, &g, &init.with_sigma(0.0), &cfg, &Monitors::default()).unwrap();
    let ode0 = ode_solve(&p, &g, 0.0, 0.0, 10.0, 1e-3).unwrap();
    assert_eq!(dominance_check(&zero.trajectory, &ode0, 0.0), 0.0);
}
