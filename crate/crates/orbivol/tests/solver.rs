use orbivol::complexfn::{mod_distance, Cx};
use orbivol::cvolume::{complex_volume, EQUATION_TOL};
use orbivol::diagram::{generate_j_diagram, parse_pd, KnotDiagram, FIGURE_EIGHT_PD};
use orbivol::potential::{build_potential, hyperbolicity_residual, PotentialFunction};
use orbivol::solver::{
    continue_to_orbifold, regular_seed, solve_complete, solve_orbifold, SeedStrategy, SolverConfig,
};
use orbivol::Error;

const FIGURE_EIGHT_VOLUME: f64 = 2.0298832128;

fn figure_eight() -> (KnotDiagram, PotentialFunction) {
    let d = parse_pd(FIGURE_EIGHT_PD).unwrap();
    let pf = build_potential(&d);
    (d, pf)
}

fn j_diagram(n: usize, m: usize) -> (KnotDiagram, PotentialFunction) {
    let d = generate_j_diagram(n, m).unwrap();
    let pf = build_potential(&d);
    (d, pf)
}

fn assert_row(w: Cx, re: f64, im: f64, mu: f64, tol: f64) {
    assert!((w.im - im).abs() <= tol, "volume {} vs {im}", w.im);
    assert!(
        mod_distance(w.re, re, mu) <= tol,
        "Re w {} vs {re} mod {mu}",
        w.re
    );
}

#[test]
fn figure_eight_complete_structure() {
    let (d, pf) = figure_eight();
    let cfg = SolverConfig::default();
    let sol = solve_complete(&pf, &d, &cfg).unwrap();
    assert!(sol.residual <= cfg.tol);
    assert!((sol.volume - FIGURE_EIGHT_VOLUME).abs() <= 1e-9);
    let inv = complex_volume(&pf, &sol.z, None).unwrap();
    assert!((inv.volume - FIGURE_EIGHT_VOLUME).abs() <= 1e-9);
    assert!(inv.cs_rep.min(inv.modulus - inv.cs_rep) <= 1e-9);
    assert!(sol.warnings.is_empty());
}

#[test]
fn two_construction_paths_agree() {
    let cfg = SolverConfig::default();
    let (d, pf) = figure_eight();
    let (jd, jpf) = j_diagram(1, 1);
    let a = solve_complete(&pf, &d, &cfg).unwrap();
    let b = solve_complete(&jpf, &jd, &cfg).unwrap();
    assert!((a.volume - b.volume).abs() <= 1e-9);
}

#[test]
fn figure_eight_order_six() {
    let (d, pf) = figure_eight();
    let sol = solve_orbifold(&pf, &d, 6, &SolverConfig::default()).unwrap();
    let inv = complex_volume(&pf, &sol.z, Some(6)).unwrap();
    assert_row(inv.w_raw, 3.28986813, 1.22128746, inv.modulus, 1e-7);
}

#[test]
fn figure_eight_order_three_fails() {
    let (d, pf) = figure_eight();
    match solve_orbifold(&pf, &d, 3, &SolverConfig::default()) {
        Err(Error::Continuation { last_t }) => assert!(last_t < 2.0 * std::f64::consts::PI / 3.0),
        other => panic!("expected a continuation error, got {other:?}"),
    }
}

#[test]
fn j42_order_five() {
    let (d, pf) = j_diagram(2, 1);
    let sol = solve_orbifold(&pf, &d, 5, &SolverConfig::default()).unwrap();
    let inv = complex_volume(&pf, &sol.z, Some(5)).unwrap();
    assert_row(inv.w_raw, -3.52261279, 2.17889926, inv.modulus, 1e-6);
}

#[test]
fn halving_the_step_count_reaches_the_same_solution() {
    let (d, pf) = j_diagram(2, 1);
    let cfg = SolverConfig::default();
    let complete = solve_complete(&pf, &d, &cfg).unwrap();
    let fine = continue_to_orbifold(&pf, &complete.z, 7, &cfg).unwrap();
    let coarse_cfg = SolverConfig {
        continuation_steps: cfg.continuation_steps / 2,
        ..cfg.clone()
    };
    let coarse = continue_to_orbifold(&pf, &complete.z, 7, &coarse_cfg).unwrap();
    for (a, b) in fine.z.z.iter().zip(&coarse.z.z) {
        assert!((a - b).norm() <= 1e-8, "{a} vs {b}");
    }
}

#[test]
fn returned_solutions_meet_the_residual_contract() {
    let cfg = SolverConfig {
        tol: 1e-10,
        ..SolverConfig::default()
    };
    for (n, m, r) in [(1, 1, 4), (2, 1, 8), (2, 2, 5)] {
        let (d, pf) = j_diagram(n, m);
        let sol = solve_orbifold(&pf, &d, r, &cfg).unwrap();
        assert!(sol.residual <= cfg.tol);
        let angle = 2.0 * std::f64::consts::PI / r as f64;
        assert!(hyperbolicity_residual(&pf, &sol.z.z, angle).unwrap() <= EQUATION_TOL);
        assert!(sol.z.gauge_fixed && sol.z.z[0] == Cx::new(1.0, 0.0));
    }
}

#[test]
fn given_seed_strategy() {
    let (d, pf) = figure_eight();
    let best = solve_complete(&pf, &d, &SolverConfig::default()).unwrap();
    let cfg = SolverConfig {
        seed_strategy: SeedStrategy::Given,
        initial: Some(best.z.clone()),
        ..SolverConfig::default()
    };
    let again = solve_complete(&pf, &d, &cfg).unwrap();
    assert!((again.volume - best.volume).abs() <= 1e-9);
    let missing = SolverConfig {
        seed_strategy: SeedStrategy::Given,
        ..SolverConfig::default()
    };
    assert!(solve_complete(&pf, &d, &missing).is_err());
}

#[test]
fn regular_seed_lies_on_the_unit_circle() {
    let (_, pf) = j_diagram(3, 2);
    let z = regular_seed(&pf);
    assert_eq!(z.z.len(), pf.num_segments);
    assert!(z.z.iter().all(|x| (x.norm() - 1.0).abs() < 1e-12));
}

#[test]
fn invalid_configuration_is_rejected() {
    let (d, pf) = figure_eight();
    for cfg in [
        SolverConfig {
            tol: 0.0,
            ..SolverConfig::default()
        },
        SolverConfig {
            max_iter: 0,
            ..SolverConfig::default()
        },
        SolverConfig {
            continuation_steps: 0,
            ..SolverConfig::default()
        },
    ] {
        assert!(solve_complete(&pf, &d, &cfg).is_err());
    }
    assert!(matches!(
        solve_orbifold(&pf, &d, 2, &SolverConfig::default()),
        Err(Error::Domain(_))
    ));
}

#[test]
fn broken_incidence_is_structural() {
    assert!(matches!(
        parse_pd("X 1 2 3 4\nX 4 5 6 1\nX 2 3 5 7\n"),
        Err(Error::Structural(_))
    ));
    assert!(matches!(
        KnotDiagram::from_slots(vec![[0, 1, 2, 3], [3, 2, 1, 5]], 4),
        Err(Error::Structural(_))
    ));
}
