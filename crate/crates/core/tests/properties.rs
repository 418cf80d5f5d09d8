use std::f64::consts::PI;

use proptest::prelude::*;

use epifront::model::{
    basic_reproduction_number, free_boundary_reproduction_number, principal_eigenvalue,
    InfectionResponse, InitialData, ModelParams, Shape,
};
use epifront::solver::{simulate, Monitors, SolverConfig};
use epifront::analysis::{max_center_drift, Verdict};

fn params() -> impl Strategy<Value = ModelParams> {
    (0.1..3.0f64, 0.2..3.0f64, 0.2..3.0f64, 0.2..3.0f64, 0.2..3.0f64, 0.3..3.0f64)
        .prop_map(|(d, a11, a12, a22, mu, h0)| ModelParams::new(d, a11, a12, a22, mu, h0).unwrap())
}

proptest! {
    #[test]
    fn r0f_increases_with_width_towards_r0(p in params(), a21 in 0.1..5.0f64, w in 0.1..20.0f64, k in 1.01..4.0f64) {
        let g = InfectionResponse::monod(a21).unwrap();
        let r0 = basic_reproduction_number(&p, &g);
        let narrow = free_boundary_reproduction_number(&p, &g, w).unwrap();
        let wide = free_boundary_reproduction_number(&p, &g, k * w).unwrap();
        prop_assert!(narrow < wide);
        prop_assert!(wide < r0);
        let huge = free_boundary_reproduction_number(&p, &g, 1e7).unwrap();
        prop_assert!((huge - r0).abs() <= 1e-9 * r0);
    }

    #[test]
    fn eigenvalue_sign_matches_r0f(p in params(), a21 in 0.1..5.0f64, w in 0.1..20.0f64) {
        let g = InfectionResponse::monod(a21).unwrap();
        let lambda = principal_eigenvalue(&p, &g, w).unwrap();
        let r0f = free_boundary_reproduction_number(&p, &g, w).unwrap();
        if (r0f - 1.0).abs() > 1e-9 {
            prop_assert_eq!(lambda > 0.0, r0f < 1.0);
        }
    }
}

fn quick(p: &ModelParams, t_max: f64) -> SolverConfig {
    let mut c = SolverConfig::defaults_for(p);
    c.n_cells = 64;
    c.t_max = t_max;
    c.frame_stride = t_max / 20.0;
    c.early_stop = false;
    c.keep_fields = true;
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn larger_data_gives_larger_solution(s1 in 0.05..1.0f64, ratio in 1.1..3.0f64, a21 in 1.2..3.0f64) {
        let p = ModelParams::unit();
        let g = InfectionResponse::monod(a21).unwrap();
        let cfg = quick(&p, 3.0);
        let lo = simulate(&p, &g, &InitialData::cosine(s1, 1.0).unwrap(), &cfg, &Monitors::default()).unwrap();
        let hi = simulate(&p, &g, &InitialData::cosine(s1 * ratio, 1.0).unwrap(), &cfg, &Monitors::default()).unwrap();
        for (a, b) in lo.trajectory.frames.iter().zip(&hi.trajectory.frames) {
            prop_assert!(a.h <= b.h && a.g >= b.g);
            let (sa, sb) = (a.state(1.0).unwrap(), b.state(1.0).unwrap());
            for k in 0..=200 {
                let x = b.g + (b.h - b.g) * k as f64 / 200.0;
                let (ua, va) = sa.sample_physical(x);
                let (ub, vb) = sb.sample_physical(x);
                prop_assert!(ua <= ub + 1e-3 && va <= vb + 1e-3, "t={} x={} {} {}", a.t, x, ua, ub);
            }
        }
    }

    #[test]
    fn symmetric_data_stays_symmetric(sigma in 0.05..2.0f64, a21 in 0.5..3.0f64, h0 in 0.5..2.0f64) {
        let p = ModelParams::unit().with_h0(h0);
        let g = InfectionResponse::monod(a21).unwrap();
        let out = simulate(&p, &g, &InitialData::cosine(sigma, h0).unwrap(), &quick(&p, 5.0), &Monitors::default()).unwrap();
        prop_assert!(max_center_drift(&out.trajectory) < 1e-8);
    }
}

#[test]
fn front_position_self_converges() {
    let p = ModelParams::unit();
    let g = InfectionResponse::monod(2.0).unwrap();
    let init = InitialData::cosine(0.5, 1.0).unwrap();
    let h: Vec<f64> = [32usize, 64, 128, 256]
        .iter()
        .map(|&n| {
            let mut c = quick(&p, 1.0);
            c.n_cells = n;
            c.dt_max = 0.128 / (n * n) as f64;
            c.keep_fields = false;
            simulate(&p, &g, &init, &c, &Monitors::default()).unwrap().trajectory.last().unwrap().h
        })
        .collect();
    let diffs: Vec<f64> = h.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(diffs.windows(2).all(|d| d[1] < 0.7 * d[0]), "{h:?}");
}

#[test]
fn skewed_data_drifts_but_stays_in_band() {
    let p = ModelParams::unit();
    let g = InfectionResponse::monod(2.0).unwrap();
    let init = InitialData::new(1.0, Shape::SkewedCosine { skew: 0.5 }, Shape::Cosine, 1.0).unwrap();
    let out = simulate(&p, &g, &init, &quick(&p, 10.0), &Monitors::default()).unwrap();
    let drift = max_center_drift(&out.trajectory);
    assert!(drift > 1e-4 && drift < 2.0, "{drift}");
}

#[test]
fn wide_initial_habitat_spreads_for_any_data() {
    let p = ModelParams::unit().with_h0(0.55 * PI * 1.05);
    let g = InfectionResponse::monod(2.0).unwrap();
    for sigma in [1e-4, 1e-2, 1.0] {
        let mut c = quick(&p, 50.0);
        c.early_stop = true;
        c.keep_fields = false;
        let out = simulate(&p, &g, &InitialData::cosine(sigma, p.h0).unwrap(), &c, &Monitors::default()).unwrap();
        assert_eq!(out.classification.verdict, Verdict::Spreading);
    }
}
