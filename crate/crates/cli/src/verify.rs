//! The verification suite behind `loggp verify`.
//!
//! Work items run on the rayon pool and return their checks; the report
//! keeps the item order, so it depends only on the tier, seed and mutation.

use std::f64::consts::{PI, SQRT_2};

use loggp::energy::{energy_report, h1_modulus_distance, log_moment};
use loggp::evolution::{evolve, frequency_probe, make_pair_box, Nonlinearity, SplitStep, Trajectory};
use loggp::galerkin::{cross_solver_gap, galerkin_evolve};
use loggp::profiles::{
    black_soliton, energy_identity_defect, eta_identity_defect, gp_dark_soliton, stationary_residual,
    tail_decay_rate, traveling_modulus_with_force, traveling_phase, traveling_wave, WaveProfile,
};
use loggp::scalars::{
    bisect, f_c, find_critical_points, g_c, h_c, h_c_interior_zeros, log_continuity_sides, log_monotonicity_sides,
    modulus_potential_sides, sign_change_brackets, MODULUS_POTENTIAL_CONSTANTS, SCAN_POINTS,
};
use loggp::{Complex64, Error, EvolutionConfig, Grid, GridFunction, Params};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::report::{Check, Environment, Relation, VerificationReport};

/// Frozen constant of the `|| |v| - 1 ||_{H^1}^2 <= C max(1, 1/lambda) E(v)` proxy
/// (largest measured value 0.86 over the profile family).
pub const EQUIVALENCE_CONSTANT: f64 = 1.5;
/// Frozen constant of the `lambda || v ln|v|^2 ||^2 <= C (E + E^2)` proxy (largest measured value 0.76).
pub const LOG_MOMENT_CONSTANT: f64 = 1.5;
/// Frozen constant of the `E(v + f) <= C (E + E^3 + ||f||^2 + ||f||^3)` proxy (largest measured value 0.50).
pub const SUM_ENERGY_CONSTANT: f64 = 1.0;
/// Relative slack on the fuzzed inequalities, for rounding in the two sides.
pub const FUZZ_SLACK: f64 = 1e-12;
const FUZZ_CHUNK: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Flip the sign of the force `f_c` in the traveling-wave modulus equation.
    FcSign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tier {
    pub name: &'static str,
    /// Black-soliton resolution on `[-20, 20]`.
    pub profile_n: usize,
    /// Grid of the smooth-data conservation run on `[-40, 40)`.
    pub drift_n: usize,
    /// Final time of the long evolutions.
    pub t_long: f64,
    pub fuzz_pairs: usize,
    pub galerkin_orders: [usize; 3],
    /// Half width of the Galerkin domain and its number of points.
    pub galerkin_half_width: f64,
    pub galerkin_points: usize,
}

impl Tier {
    pub fn full() -> Self {
        Self {
            name: "full",
            profile_n: 4096,
            drift_n: 2048,
            t_long: 5.0,
            fuzz_pairs: 1_000_000,
            galerkin_orders: [16, 32, 64],
            galerkin_half_width: 30.0,
            galerkin_points: 2049,
        }
    }

    pub fn quick() -> Self {
        Self {
            name: "quick",
            profile_n: 512,
            drift_n: 512,
            t_long: 1.0,
            fuzz_pairs: 100_000,
            galerkin_orders: [8, 16, 32],
            galerkin_half_width: 20.0,
            galerkin_points: 801,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Spec {
    name: &'static str,
    criterion: Option<u8>,
    claim: &'static str,
    relation: Relation,
    tolerance: f64,
}

const fn spec(name: &'static str, criterion: Option<u8>, claim: &'static str, relation: Relation, tolerance: f64) -> Spec {
    Spec { name, criterion, claim, relation, tolerance }
}

/// Checks sharing one computation; if it fails, every check fails with its error.
fn run(specs: &[Spec], metrics: loggp::Result<Vec<f64>>) -> Vec<Check> {
    match metrics {
        Ok(values) => {
            assert_eq!(values.len(), specs.len(), "one metric per check");
            specs
                .iter()
                .zip(values)
                .map(|(s, v)| Check::new(s.name, s.criterion, s.claim, v, s.relation, s.tolerance))
                .collect()
        }
        Err(e) => specs
            .iter()
            .map(|s| Check::failed(s.name, s.criterion, s.claim, s.relation, s.tolerance, &e))
            .collect(),
    }
}

fn params(lambda: f64, c: f64) -> Params {
    Params::new(lambda, c).expect("fixed parameters are valid")
}

const BLACK_SPECS: [Spec; 7] = [
    spec("profile-residual", Some(1), "black soliton (lambda=1, L=40) stationary residual", Relation::Below, 1e-6),
    spec("profile-residual-order", Some(1), "residual self-convergence order when dx is halved", Relation::AtLeast, 3.5),
    spec("energy-identity", Some(2), "max |(phi')^2 - lambda F(phi^2)|, relative", Relation::Below, 1e-8),
    spec("equipartition", Some(2), "|kinetic - pot_log| / total on the black soliton", Relation::Below, 1e-6),
    spec("black-soliton-monotone-odd", Some(5), "samples violating oddness or strict increase", Relation::AtMost, 0.0),
    spec("black-soliton-limits", Some(5), "max |phi(+-20) -+ 1|", Relation::Below, 1e-8),
    spec("black-soliton-tail-rate", Some(5), "|tail rate / sqrt(2 lambda) - 1|", Relation::Below, 0.1),
];

fn black_soliton_checks(tier: &Tier) -> Vec<Check> {
    let metrics = (|| {
        let p = params(1.0, 0.0);
        let fine = black_soliton(&p, &Grid::symmetric(40.0, tier.profile_n)?)?;
        let coarse = black_soliton(&p, &Grid::symmetric(40.0, tier.profile_n / 2)?)?;
        let r_fine = stationary_residual(&fine)?;
        let r_coarse = stationary_residual(&coarse)?;
        let e = fine.energy()?;
        let phi: Vec<f64> = fine.phi.iter().map(|z| z.re).collect();
        let n = phi.len();
        let mut violations = 0usize;
        for j in 0..n {
            if phi[j] != -phi[n - 1 - j] {
                violations += 1;
            }
            // strictly increasing until the tail saturates at exactly one
            if j + 1 < n && !(phi[j + 1] > phi[j] || phi[j].abs() == 1.0 && phi[j + 1].abs() == 1.0) {
                violations += 1;
            }
        }
        let limits = (phi[n - 1] - 1.0).abs().max((phi[0] + 1.0).abs());
        let rate = tail_decay_rate(&fine)? / (2.0 * p.lambda).sqrt();
        Ok(vec![
            r_fine,
            (r_coarse / r_fine).log2(),
            energy_identity_defect(&fine),
            (e.kinetic - e.pot_log).abs() / e.total_loggp,
            violations as f64,
            limits,
            (rate - 1.0).abs(),
        ])
    })();
    run(&BLACK_SPECS, metrics)
}

const WAVE_SPECS: [Spec; 3] = [
    spec("eta-identity", Some(3), "max |(eta')^2 / 2 - h_c(eta)| on the wave lambda=1, c=1", Relation::Below, 1e-7),
    spec("min-modulus-vs-bisection", Some(3), "|min rho - y0| with y0 from a separate bisection of g_c", Relation::Below, 1e-6),
    spec("traveling-wave-residual", None, "stationary residual of the wave lambda=1, c=1", Relation::Below, 1e-5),
];

/// The wave used by the criterion-3 checks, optionally built with a corrupted force.
fn checked_wave(p: &Params, grid: &Grid, mutation: Option<Mutation>) -> loggp::Result<WaveProfile> {
    match mutation {
        None => traveling_wave(p, grid, 0.0),
        Some(Mutation::FcSign) => {
            let y0 = find_critical_points(p)?.y0;
            let rho = traveling_modulus_with_force(p, grid, y0, |r| -f_c(r, p).unwrap_or(f64::NAN))?;
            let theta = traveling_phase(&rho, grid, p, 0.0)?;
            let mut w = traveling_wave(p, grid, 0.0)?;
            w.phi = rho.iter().zip(&theta).map(|(&r, &t)| Complex64::from_polar(r, t)).collect();
            w.eta = rho.iter().map(|r| (1.0 - r) * (1.0 + r)).collect();
            w.rho = rho;
            w.theta = theta;
            Ok(w)
        }
    }
}

fn traveling_wave_checks(mutation: Option<Mutation>) -> Vec<Check> {
    let metrics = (|| {
        let p = params(1.0, 1.0);
        let grid = Grid::symmetric(40.0, 4001)?;
        let w = checked_wave(&p, &grid, mutation)?;
        let g = |y: f64| g_c(y, &p).unwrap_or(f64::NAN);
        let brackets = sign_change_brackets(g, 1e-6, 1.0 - 1e-6, SCAN_POINTS);
        let &(a, b) = brackets
            .first()
            .ok_or_else(|| Error::NoInteriorRoot("g_c has no sign change".into()))?;
        let y0 = bisect(g, a, b, 1e-14)?;
        Ok(vec![eta_identity_defect(&w), (w.min_modulus() - y0).abs(), stationary_residual(&w)?])
    })();
    run(&WAVE_SPECS, metrics)
}

pub const SUBSONIC: [f64; 7] = [0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4];
pub const SUPERSONIC: [f64; 3] = [SQRT_2, 1.5, 2.0];

const THRESHOLD_SPECS: [Spec; 5] = [
    spec("subsonic-waves-exist", Some(4), "failed constructions for c in {0.2, ..., 1.4}, lambda=1", Relation::AtMost, 0.0),
    spec("supersonic-rejected", Some(4), "c in {sqrt 2, 1.5, 2} not rejected with the threshold error", Relation::AtMost, 0.0),
    spec("h_c-negative-above-threshold", Some(4), "max of h_c on (0, 1) for c^2 >= 2 lambda", Relation::Below, 0.0),
    spec("h_c-zero-is-1-minus-y0-squared", None, "max |zero of h_c - (1 - y0^2)| over the subsonic sweep", Relation::Below, 1e-9),
    spec("y0-single-root", None, "subsonic velocities without exactly one sign change of g_c or with min rho != y0", Relation::AtMost, 0.0),
];

fn threshold_checks() -> Vec<Check> {
    let metrics = (|| {
        let grid = Grid::symmetric(40.0, 801)?;
        let mut failed = 0usize;
        let mut zero_gap: f64 = 0.0;
        let mut root_violations = 0usize;
        for &c in &SUBSONIC {
            let p = params(1.0, c);
            match traveling_wave(&p, &grid, 0.0) {
                Ok(w) => {
                    let y0 = w.y0.unwrap_or(f64::NAN);
                    if !(w.min_modulus() > 0.0 && (w.min_modulus() - y0).abs() < 1e-12) {
                        root_violations += 1;
                    }
                }
                Err(_) => failed += 1,
            }
            let g = |y: f64| g_c(y, &p).unwrap_or(f64::NAN);
            if sign_change_brackets(g, 1e-6, 1.0 - 1e-6, SCAN_POINTS).len() != 1 {
                root_violations += 1;
            }
            let zeros = h_c_interior_zeros(&p, SCAN_POINTS);
            let y0 = find_critical_points(&p)?.y0;
            zero_gap = zero_gap.max(match zeros.as_slice() {
                [z] => (z - (1.0 - y0 * y0)).abs(),
                _ => f64::INFINITY,
            });
        }
        let mut not_rejected = 0usize;
        let mut h_max = f64::NEG_INFINITY;
        for &c in &SUPERSONIC {
            let p = params(1.0, c);
            if !matches!(traveling_wave(&p, &grid, 0.0), Err(Error::VelocityAboveThreshold { .. })) {
                not_rejected += 1;
            }
            if !h_c_interior_zeros(&p, SCAN_POINTS).is_empty() {
                h_max = f64::INFINITY;
            }
            for k in 1..SCAN_POINTS {
                let y = k as f64 / SCAN_POINTS as f64;
                h_max = h_max.max(h_c(y, &p)?);
            }
        }
        Ok(vec![failed as f64, not_rejected as f64, h_max, zero_gap, root_violations as f64])
    })();
    run(&THRESHOLD_SPECS, metrics)
}

/// Black soliton on the odd half-line grid used by the stationary runs; `dt` keeps
/// `k_max^2 dt` below `pi`.
fn stationary_setup() -> loggp::Result<(Params, GridFunction)> {
    let p = params(1.0, 0.0);
    let grid = Grid::dirichlet_odd(20.0, 512)?;
    Ok((p, black_soliton(&p, &grid)?.to_grid_function()))
}

const STATIONARY_DT: f64 = 4e-4;

const STATIONARY_SPECS: [Spec; 4] = [
    spec("omega-zero", Some(6), "|frequency| of the evolved black soliton", Relation::Below, 1e-3),
    spec("omega-calibration", Some(6), "|recovered - injected| frequency on a synthetic trajectory", Relation::Below, 1e-6),
    spec("stationary-deviation", None, "L2 distance of the evolved black soliton from its datum", Relation::Below, 1e-4),
    spec("black-soliton-drift", None, "energy drift of the black soliton, eps = 0", Relation::Below, 1e-4),
];

fn stationary_checks(tier: &Tier) -> Vec<Check> {
    let metrics = (|| {
        let (p, u0) = stationary_setup()?;
        let cfg = EvolutionConfig::new(p, STATIONARY_DT, tier.t_long, Nonlinearity::Log)?
            .with_record_every(250)?
            .with_snapshots(true);
        let traj = evolve(&u0, &cfg)?;
        let omega = frequency_probe(&traj, |_| Ok(u0.clone()))?;

        let injected = 0.37;
        let times: Vec<f64> = (0..50).map(|k| 0.1 * k as f64).collect();
        let snapshots = times.iter().map(|&t| u0.map(|z| z * Complex64::from_polar(1.0, injected * t))).collect();
        let synthetic = Trajectory {
            times,
            energy_series: vec![],
            mass_defect_series: vec![],
            h2_series: vec![],
            l2_series: vec![],
            energy_drift: 0.0,
            steps: 0,
            final_state: u0.clone(),
            snapshots,
        };
        let recovered = frequency_probe(&synthetic, |_| Ok(u0.clone()))?;
        Ok(vec![
            omega.abs(),
            (recovered - injected).abs(),
            traj.final_state.l2_distance(&u0)?,
            traj.energy_drift,
        ])
    })();
    run(&STATIONARY_SPECS, metrics)
}

const REGULARIZED_SPECS: [Spec; 2] = [
    spec("black-soliton-drift-regularized", None, "energy drift of the black soliton, eps = 1e-8", Relation::Below, 1e-6),
    spec("eps-consistency", None, "largest ratio of successive distances to the eps = 0 state, eps = 1e-6, 1e-8, 1e-10", Relation::Below, 1.0),
];

fn regularized_checks(tier: &Tier) -> Vec<Check> {
    let metrics = (|| {
        let (p, u0) = stationary_setup()?;
        let long = EvolutionConfig::regularized(p, STATIONARY_DT, tier.t_long, 1e-8)?.with_record_every(250)?;
        let drift = evolve(&u0, &long)?.energy_drift;
        let t = 1.0;
        let reference = evolve(&u0, &EvolutionConfig::new(p, STATIONARY_DT, t, Nonlinearity::Log)?)?.final_state;
        let distances = [1e-6, 1e-8, 1e-10]
            .par_iter()
            .map(|&eps| {
                let cfg = EvolutionConfig::regularized(p, STATIONARY_DT, t, eps)?;
                evolve(&u0, &cfg)?.final_state.l2_distance(&reference)
            })
            .collect::<loggp::Result<Vec<f64>>>()?;
        let ratio = distances.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
        Ok(vec![drift, ratio])
    })();
    run(&REGULARIZED_SPECS, metrics)
}

/// Vacuum-free datum `1 + 0.3 e^{-x^2} + 0.2 i x e^{-x^2/2}`.
fn smooth_bump(grid: Grid) -> GridFunction {
    GridFunction::from_fn(grid, |x| Complex64::new(1.0 + 0.3 * (-x * x).exp(), 0.2 * x * (-0.5 * x * x).exp()))
}

const CONSERVATION_SPECS: [Spec; 4] = [
    spec("energy-drift", Some(7), "split-step energy drift, vacuum-free data, dt = 1e-3", Relation::Below, 1e-6),
    spec("l2-per-step", Some(7), "relative change of the discrete L2 norm per step", Relation::Below, 1e-12),
    spec("strang-order", Some(7), "|error ratio - 4| when dt is halved (ratio in [3.6, 4.4])", Relation::AtMost, 0.4),
    spec("gronwall-stability", None, "||u - v||(t) / (delta e^{2 lambda t}) at t = 1", Relation::AtMost, 1.0),
];

fn conservation_checks(tier: &Tier) -> Vec<Check> {
    let metrics = (|| {
        let p = params(1.0, 0.0);
        let grid = Grid::periodic(-40.0, 80.0, tier.drift_n)?;
        let u0 = smooth_bump(grid);
        let cfg = EvolutionConfig::new(p, 1e-3, tier.t_long, Nonlinearity::Log)?.with_record_every(100)?;
        let drift = evolve(&u0, &cfg)?.energy_drift;

        let prop = SplitStep::new(&grid, &cfg)?;
        let mut u = u0.clone();
        let mut l2_step: f64 = 0.0;
        for _ in 0..50 {
            let next = prop.step(&u)?;
            let (a, b) = (u.l2_norm().powi(2), next.l2_norm().powi(2));
            l2_step = l2_step.max((b - a).abs() / a);
            u = next;
        }

        let small = Grid::periodic(-20.0, 40.0, 256)?;
        let v0 = smooth_bump(small);
        let at = |dt: f64| -> loggp::Result<GridFunction> {
            let cfg = EvolutionConfig::new(p, dt, 0.5, Nonlinearity::Log)?.with_record_every(1_000_000)?;
            Ok(evolve(&v0, &cfg)?.final_state)
        };
        let reference = at(0.01 / 16.0)?;
        let ratio = at(0.01)?.l2_distance(&reference)? / at(0.005)?.l2_distance(&reference)?;

        let delta_shape = GridFunction::from_fn(small, |x| Complex64::new(0.0, (-(x - 1.0) * (x - 1.0)).exp()));
        let delta = 1e-4;
        let scale = delta / delta_shape.l2_norm();
        let w0 = v0.zip_with(&delta_shape, |a, b| a + b * scale)?;
        let cfg = EvolutionConfig::new(p, 1e-3, 1.0, Nonlinearity::Log)?;
        let gap = evolve(&v0, &cfg)?.final_state.l2_distance(&evolve(&w0, &cfg)?.final_state)?;
        let gronwall = gap / (delta * (2.0 * p.lambda).exp());
        Ok(vec![drift, l2_step, (ratio - 4.0).abs(), gronwall])
    })();
    run(&CONSERVATION_SPECS, metrics)
}

const TRANSLATE_SPECS: [Spec; 3] = [
    spec("gp-dark-soliton-translate", Some(8), "L2 error against the exact translate, c = 0.5", Relation::Below, 1e-4),
    spec("traveling-wave-translate", None, "L2 error against the translate, lambda = 1, c = 1", Relation::Below, 1e-3),
    spec("traveling-wave-omega", None, "|frequency| of the moving wave relative to its translate", Relation::Below, 1e-2),
];

fn translate_checks(tier: &Tier) -> Vec<Check> {
    let metrics = (|| {
        let gp = gp_dark_soliton(0.5, &Grid::symmetric(40.0, 401)?)?;
        let pb = make_pair_box(&gp, 40.0)?;
        let cfg = EvolutionConfig::new(params(1.0, 0.0), 1e-3, tier.t_long, Nonlinearity::CubicGp)?;
        let traj = evolve(&pb.field, &cfg)?;
        let t = *traj.times.last().unwrap_or(&0.0);
        let gp_err = traj.final_state.l2_distance(&pb.translated(t)?)?;

        let p = params(1.0, 1.0);
        let w = traveling_wave(&p, &Grid::symmetric(40.0, 801)?, 0.0)?;
        let pb = make_pair_box(&w, 40.0)?;
        let t_end = 0.4 * tier.t_long;
        let cfg = EvolutionConfig::new(p, 1e-3, t_end, Nonlinearity::Log)?
            .with_record_every(100)?
            .with_snapshots(true);
        let traj = evolve(&pb.field, &cfg)?;
        let t = *traj.times.last().unwrap_or(&0.0);
        let tw_err = traj.final_state.l2_distance(&pb.translated(t)?)?;
        let omega = frequency_probe(&traj, |s| pb.translated(s))?;
        Ok(vec![gp_err, tw_err, omega.abs()])
    })();
    run(&TRANSLATE_SPECS, metrics)
}

/// Galerkin datum `1 + 0.3 e^{-x^2} + 0.1 i x e^{-x^2}`.
fn galerkin_datum(x: f64) -> Complex64 {
    Complex64::new(1.0 + 0.3 * (-x * x).exp(), 0.1 * x * (-x * x).exp())
}

const GALERKIN_SPECS: [Spec; 5] = [
    spec("galerkin-conservation", Some(9), "largest relative energy drift of the Galerkin flow", Relation::Below, 1e-8),
    spec("galerkin-gradient-bound", Some(9), "max ||phi_m'|| / (2 sqrt E(u0)) over records and orders", Relation::AtMost, 1.0),
    spec("galerkin-gap-decreasing", Some(9), "largest ratio of successive cross-solver gaps at t = 1", Relation::Below, 1.0),
    spec("stiffness-min-singular", None, "smallest singular value of the stiffness matrices", Relation::Above, 0.0),
    spec("holder-stability", None, "max / min of the fitted 1/2-Holder constants across orders", Relation::AtMost, 1.5),
];

fn galerkin_checks(tier: &Tier) -> Vec<Check> {
    let metrics = (|| {
        let p = params(1.0, 0.0);
        let t_end = 1.0;
        let half = tier.galerkin_half_width;
        let free = Grid::free(-half, half, tier.galerkin_points)?;
        // reference: split-step on a box twice as wide with the same spacing
        let box_n = 2 * (tier.galerkin_points - 1);
        let wide = Grid::periodic(-2.0 * half, 4.0 * half, box_n)?;
        let ref_cfg = EvolutionConfig::new(p, 2.5e-4, t_end, Nonlinearity::Log)?.with_record_every(1_000_000)?;
        let u0 = GridFunction::from_fn(free, galerkin_datum);
        let orders = tier.galerkin_orders;
        let (reference, runs) = rayon::join(
            || evolve(&GridFunction::from_fn(wide, galerkin_datum), &ref_cfg),
            || {
                orders
                    .par_iter()
                    .map(|&m| {
                        let cfg = EvolutionConfig::new(p, 1e-3, t_end, Nonlinearity::Log)?.with_record_every(50)?;
                        let (state, traj) = galerkin_evolve(&u0, m, &cfg)?;
                        let holder = traj.holder_constant(&state);
                        Ok((traj, holder))
                    })
                    .collect::<loggp::Result<Vec<_>>>()
            },
        );
        let reference = reference?.final_state;
        let runs = runs?;
        let mut drift: f64 = 0.0;
        let mut grad: f64 = 0.0;
        let mut s_min = f64::INFINITY;
        let mut gaps = Vec::new();
        let mut holders = Vec::new();
        for (traj, holder) in &runs {
            drift = drift.max(traj.energy_drift);
            grad = grad.max(traj.gradient_series.iter().fold(0.0, |a: f64, &g| a.max(g)) / traj.gradient_bound);
            s_min = s_min.min(traj.stiffness_min_singular);
            gaps.push(cross_solver_gap(&traj.final_state, &reference)?);
            holders.push(*holder);
        }
        let gap_ratio = gaps.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
        let h_max = holders.iter().copied().fold(0.0, f64::max);
        let h_min = holders.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(vec![drift, grad, gap_ratio, s_min, h_max / h_min])
    })();
    run(&GALERKIN_SPECS, metrics)
}

const FUZZ_SPECS: [Spec; 4] = [
    spec("fuzz-monotonicity", Some(10), "pairs violating |Im((z2 ln|z2|^2 - z1 ln|z1|^2)(z2 - z1)^*)| <= 2|z2 - z1|^2", Relation::AtMost, 0.0),
    spec("fuzz-continuity", Some(10), "pairs violating the Holder-type continuity bound, C = 2^{1+e}, e in {0.1, 0.25, 0.5, 0.9}", Relation::AtMost, 0.0),
    spec("fuzz-modulus-lower", Some(10), "moduli violating ln 2 (y-1)^2 <= (y-1)^2 ln(2+y), tested exactly", Relation::AtMost, 0.0),
    spec("fuzz-modulus-upper", Some(10), "moduli violating (y-1)^2 ln(2+y) <= ln 3 (y-1)^2 + C_p |y-1|^p, frozen C_p", Relation::AtMost, 0.0),
];

fn sample_point(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = if rng.gen_bool(0.7) {
        10f64.powf(rng.gen_range(-4.0..2.0))
    } else {
        1.0 + rng.gen_range(-0.1..0.1)
    };
    Complex64::from_polar(r, rng.gen_range(0.0..2.0 * PI))
}

/// Violation counts of the four fuzzed inequalities on one chunk of pairs.
fn fuzz_chunk(seed: u64, chunk: u64, pairs: usize) -> [usize; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut counts = [0usize; 4];
    for _ in 0..pairs {
        let z1 = sample_point(&mut rng);
        let z2 = if rng.gen_bool(0.3) {
            z1 + Complex64::new(rng.gen_range(-1e-3..1e-3), rng.gen_range(-1e-3..1e-3))
        } else {
            sample_point(&mut rng)
        };
        let (lhs, rhs) = log_monotonicity_sides(z1, z2);
        if lhs > rhs * (1.0 + FUZZ_SLACK) {
            counts[0] += 1;
        }
        if [0.1, 0.25, 0.5, 0.9].iter().any(|&e| {
            let (lhs, rhs) = log_continuity_sides(z1, z2, e);
            lhs > rhs * (1.0 + FUZZ_SLACK)
        }) {
            counts[1] += 1;
        }
        for y in [z1.norm(), z2.norm()] {
            let (_, mid, _) = modulus_potential_sides(y, 2.0, 0.0);
            if std::f64::consts::LN_2 * (y - 1.0) * (y - 1.0) > mid {
                counts[2] += 1;
            }
            if MODULUS_POTENTIAL_CONSTANTS.iter().any(|&(q, c_q)| {
                let (_, mid, upper) = modulus_potential_sides(y, q, c_q);
                mid > upper * (1.0 + FUZZ_SLACK)
            }) {
                counts[3] += 1;
            }
        }
    }
    counts
}

fn fuzz_checks(tier: &Tier, seed: u64) -> Vec<Check> {
    let chunks = tier.fuzz_pairs.div_ceil(FUZZ_CHUNK);
    let totals = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let pairs = FUZZ_CHUNK.min(tier.fuzz_pairs - k * FUZZ_CHUNK);
            fuzz_chunk(seed, k as u64, pairs)
        })
        .reduce(|| [0; 4], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]);
    run(&FUZZ_SPECS, Ok(totals.iter().map(|&v| v as f64).collect()))
}

const ENERGY_SPACE_SPECS: [Spec; 6] = [
    spec("energy-lower-bound", None, "profiles violating ln 2 || |v| - 1 ||^2 <= int (|v|-1)^2 ln(2+|v|)", Relation::AtMost, 0.0),
    spec("modulus-h1-equivalence", None, "max min(lambda, 1) || |v| - 1 ||_{H^1}^2 / E(v) over profiles and perturbations", Relation::AtMost, EQUIVALENCE_CONSTANT),
    spec("log-moment-bound", None, "max lambda || v ln|v|^2 ||^2 / (E + E^2) over the profile family", Relation::AtMost, LOG_MOMENT_CONSTANT),
    spec("energy-increases-with-lambda", None, "black-soliton energies not increasing over lambda in {0.25, 0.5, 1, 2, 4}", Relation::AtMost, 0.0),
    spec("sum-energy-bound", None, "max E(v + f) / (E + E^3 + ||f||_{H^1}^2 + ||f||_{H^1}^3)", Relation::AtMost, SUM_ENERGY_CONSTANT),
    spec("profile-uniqueness", None, "sup distance of the wave c = 0.5 computed with dx and dx/2", Relation::Below, 1e-6),
];

fn energy_space_checks() -> Vec<Check> {
    let metrics = (|| {
        let grid = Grid::symmetric(80.0, 8001)?;
        let mut lower = 0usize;
        let mut equiv: f64 = 0.0;
        let mut moment: f64 = 0.0;
        for lambda in [0.5, 1.0, 2.0] {
            for frac in [0.0, 0.3, 0.6, 0.9] {
                let p = params(lambda, frac * (2.0 * lambda).sqrt());
                let u = traveling_wave(&p, &grid, 0.0)?.to_grid_function();
                let e = energy_report(&u, &p)?;
                moment = moment.max(lambda * log_moment(&u) / (e.total_loggp + e.total_loggp.powi(2)));
                for a in [0.0, 0.5, 2.0] {
                    let bump = GridFunction::from_fn(grid, |x| Complex64::new(a * (-(x - 2.0) * (x - 2.0)).exp(), 0.0));
                    let v = u.zip_with(&bump, |s, t| s + t)?;
                    let e = energy_report(&v, &p)?;
                    let l2 = loggp::energy::modulus_defect_lp(&v, 2.0);
                    if std::f64::consts::LN_2 * l2 > e.e_pot_hat {
                        lower += 1;
                    }
                    equiv = equiv.max(lambda.min(1.0) * h1_modulus_distance(&v)? / e.total_loggp);
                }
            }
        }
        let energies = [0.25, 0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&l| black_soliton(&params(l, 0.0), &grid)?.energy().map(|e| e.total_loggp))
            .collect::<loggp::Result<Vec<f64>>>()?;
        let not_increasing = energies.windows(2).filter(|w| !(w[1] > w[0])).count();

        let mut sum_ratio: f64 = 0.0;
        for lambda in [0.5, 1.0, 2.0] {
            let p = params(lambda, 0.0);
            let v = black_soliton(&p, &grid)?.to_grid_function();
            let ev = energy_report(&v, &p)?.total_loggp;
            for a in [Complex64::new(0.1, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-2.0, 1.0), Complex64::new(10.0, 0.0)] {
                for x0 in [0.0, 3.0] {
                    let f = GridFunction::from_fn(grid, |x| a * (-(x - x0) * (x - x0)).exp());
                    let f_h1 = (f.l2_norm().powi(2) + f.derivative(1)?.l2_norm().powi(2)).sqrt();
                    let e = energy_report(&v.zip_with(&f, |s, t| s + t)?, &p)?.total_loggp;
                    sum_ratio = sum_ratio.max(e / (ev + ev.powi(3) + f_h1 * f_h1 + f_h1.powi(3)));
                }
            }
        }

        let p = params(1.0, 0.5);
        let coarse = traveling_wave(&p, &Grid::symmetric(40.0, 2001)?, 0.0)?;
        let fine = traveling_wave(&p, &Grid::symmetric(40.0, 4001)?, 0.0)?;
        let unique = (0..coarse.grid.n).map(|j| (coarse.phi[j] - fine.phi[2 * j]).norm()).fold(0.0, f64::max);
        Ok(vec![lower as f64, equiv, moment, not_increasing as f64, sum_ratio, unique])
    })();
    run(&ENERGY_SPACE_SPECS, metrics)
}

type Item<'a> = Box<dyn Fn() -> Vec<Check> + Send + Sync + 'a>;

/// Run the suite and assemble the report.
pub fn run_suite(tier: &Tier, seed: u64, mutation: Option<Mutation>) -> VerificationReport {
    let items: Vec<Item> = vec![
        Box::new(|| black_soliton_checks(tier)),
        Box::new(move || traveling_wave_checks(mutation)),
        Box::new(threshold_checks),
        Box::new(|| stationary_checks(tier)),
        Box::new(|| regularized_checks(tier)),
        Box::new(|| conservation_checks(tier)),
        Box::new(|| translate_checks(tier)),
        Box::new(|| galerkin_checks(tier)),
        Box::new(|| fuzz_checks(tier, seed)),
        Box::new(energy_space_checks),
    ];
    let checks: Vec<Check> = items.par_iter().map(|f| f()).collect::<Vec<_>>().concat();
    let passed = checks.iter().filter(|c| c.passed).count();
    let c_grid = SUBSONIC.iter().chain(&SUPERSONIC).copied().collect();
    VerificationReport {
        tool: "loggp".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        mutate: mutation.map(|m| match m {
            Mutation::FcSign => "fc-sign".to_string(),
        }),
        environment: Environment {
            tier: tier.name.into(),
            profile_length: 40.0,
            profile_n: tier.profile_n,
            evolution_n: tier.drift_n,
            dt: 1e-3,
            lambda: 1.0,
            c_grid,
            fuzz_pairs: tier.fuzz_pairs,
            galerkin_orders: tier.galerkin_orders.to_vec(),
        },
        failed: checks.len() - passed,
        passed,
        checks,
    }
}
