use loggp::energy::energy_report;
use loggp::evolution::{evolve, make_pair_box};
use loggp::galerkin::{cross_solver_gap, galerkin_evolve};
use loggp::grid::{read_csv_from, write_csv_to};
use loggp::profiles::{black_soliton, traveling_wave};
use loggp::scalars::find_critical_points;
use loggp::*;

fn bump(grid: Grid) -> GridFunction {
    GridFunction::from_fn(grid, |x| Complex64::new(1.0 + 0.2 * (-x * x).exp(), 0.1 * (-x * x).exp()))
}

#[test]
fn wave_minimum_is_the_smallest_root() {
    let grid = Grid::symmetric(40.0, 4001).unwrap();
    for (lambda, c) in [(0.5, 0.4), (1.0, 0.9), (2.0, 1.5)] {
        let p = Params::new(lambda, c).unwrap();
        let cp = find_critical_points(&p).unwrap();
        let w = traveling_wave(&p, &grid, 0.0).unwrap();
        assert!((w.min_modulus() - cp.y0).abs() < 1e-9, "lambda={lambda} c={c}");
        assert_eq!(w.y0, Some(cp.y0));
    }
}

#[test]
fn black_soliton_energy_scales_with_sqrt_lambda() {
    let grid = Grid::symmetric(40.0, 4001).unwrap();
    let e = |lambda: f64| {
        let p = Params::new(lambda, 0.0).unwrap();
        energy_report(&black_soliton(&p, &grid).unwrap().to_grid_function(), &p).unwrap().total_loggp
    };
    let base = e(1.0);
    for lambda in [0.5, 2.0, 4.0] {
        let ratio = e(lambda) / (base * lambda.sqrt());
        assert!((ratio - 1.0).abs() < 1e-3, "lambda={lambda} ratio={ratio}");
    }
}

#[test]
fn profile_csv_round_trip() {
    let p = Params::new(1.0, 0.7).unwrap();
    let w = traveling_wave(&p, &Grid::symmetric(30.0, 601).unwrap(), 0.3).unwrap();
    let mut buf = Vec::new();
    w.write_csv_to(&mut buf).unwrap();
    let back = read_csv_from(buf.as_slice(), Boundary::Free).unwrap();
    assert_eq!(back.values(), w.phi.as_slice());
}

#[test]
fn grid_csv_round_trip_keeps_periodic_spacing() {
    let u = bump(Grid::periodic(-10.0, 20.0, 256).unwrap());
    let mut buf = Vec::new();
    write_csv_to(&mut buf, &u, &[]).unwrap();
    let back = read_csv_from(buf.as_slice(), Boundary::Periodic).unwrap();
    assert_eq!(back.values(), u.values());
    assert!((back.grid().dx - u.grid().dx).abs() < 1e-14);
}

#[test]
fn moving_wave_translates_in_pair_box() {
    let p = Params::new(1.0, 0.8).unwrap();
    let w = traveling_wave(&p, &Grid::symmetric(40.0, 401).unwrap(), 0.0).unwrap();
    let pair = make_pair_box(&w, 40.0).unwrap();
    let cfg = EvolutionConfig::new(p, 1e-3, 0.5, Nonlinearity::Log).unwrap();
    let traj = evolve(&pair.field, &cfg).unwrap();
    let expected = pair.translated(0.5).unwrap();
    let err = traj.final_state.l2_distance(&expected).unwrap();
    assert!(err < 1e-3, "translate error {err}");
}

#[test]
fn galerkin_tracks_split_step_on_short_times() {
    let p = Params::new(1.0, 0.0).unwrap();
    let cfg = EvolutionConfig::new(p, 1e-3, 0.2, Nonlinearity::Log).unwrap();
    let free = Grid::free(-15.0, 15.0, 601).unwrap();
    let periodic = Grid::periodic(-30.0, 60.0, 1200).unwrap();
    let (_, g) = galerkin_evolve(&bump(free), 24, &cfg).unwrap();
    let s = evolve(&bump(periodic), &cfg).unwrap();
    let gap = cross_solver_gap(&g.final_state, &s.final_state).unwrap();
    assert!(gap < 5e-2, "gap {gap}");
    assert!(g.energy_drift < 1e-8);
}
