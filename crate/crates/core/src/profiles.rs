//! Black and dark soliton profiles.
//!
//! The stationary wave `phi_0` solves the first-order problem
//! `phi' = sqrt(lambda F(phi^2))`, `phi(0) = 0`, and is extended as an odd
//! function. Traveling waves `phi_c = rho_c e^{i theta_c}` are built from the
//! even modulus `rho_c`, which starts at the turning point `rho(0) = y0`,
//! `rho'(0) = 0` and solves `rho'' = f_c(rho)`, and from the phase
//! `theta' = (c/2)(1 - 1/rho^2)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::path::Path;

use num_complex::Complex64;

use crate::energy::{energy_report, EnergyReport};
use crate::error::{Error, Result};
use crate::grid::{finite_difference, write_csv_to, Boundary, Grid, GridFunction};
use crate::ode::rk4_span;
use crate::scalars::{
    f_c_unchecked, find_critical_points, g_c_unchecked, h_c_unchecked, log_nonlinearity, potential_unchecked, Params,
};

/// Number of ODE steps per grid spacing.
pub const SUBSTEPS: f64 = 8.0;
/// Integration stops once the modulus is this close to one; the tail is padded with one.
pub const TAIL_CUTOFF: f64 = 1e-13;

/// A sampled solitary or traveling wave.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveProfile {
    pub grid: Grid,
    pub phi: Vec<Complex64>,
    pub rho: Vec<f64>,
    /// Phase; on the black soliton it is `theta0` for `x >= 0` and `theta0 + pi` for `x < 0`.
    pub theta: Vec<f64>,
    /// `1 - rho^2`
    pub eta: Vec<f64>,
    pub p: Params,
    /// Minimum modulus, present for `c != 0`.
    pub y0: Option<f64>,
    pub theta0: f64,
    pub x_shift: f64,
    /// Frequency of the ansatz `e^{i omega t} phi(x - ct)`; zero for every wave built here.
    pub omega: f64,
}

impl WaveProfile {
    fn assemble(grid: Grid, phi: Vec<Complex64>, theta: Vec<f64>, p: Params, y0: Option<f64>, theta0: f64) -> Self {
        let rho: Vec<f64> = phi.iter().map(|z| z.norm()).collect();
        let eta = rho.iter().map(|r| (1.0 - r) * (1.0 + r)).collect();
        Self { grid, phi, rho, theta, eta, p, y0, theta0, x_shift: 0.0, omega: 0.0 }
    }

    pub fn to_grid_function(&self) -> GridFunction {
        GridFunction::from_parts_unchecked(self.grid, self.phi.clone())
    }

    /// `theta(last) - theta(first)`.
    pub fn phase_winding(&self) -> f64 {
        self.theta[self.theta.len() - 1] - self.theta[0]
    }

    pub fn min_modulus(&self) -> f64 {
        self.rho.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn energy(&self) -> Result<EnergyReport> {
        energy_report(&self.to_grid_function(), &self.p)
    }

    /// CSV with columns `x,re,im,rho,theta`.
    pub fn write_csv_to<W: std::io::Write>(&self, writer: W) -> Result<()> {
        write_csv_to(writer, &self.to_grid_function(), &[("rho", &self.rho), ("theta", &self.theta)])
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv_to(std::fs::File::create(path)?)
    }
}

fn require_symmetric(grid: &Grid) -> Result<()> {
    if grid.bc != Boundary::Free {
        return Err(Error::InvalidGrid(format!("expected a free grid symmetric about 0, got {:?}", grid.bc)));
    }
    if (grid.x0 + grid.x_max()).abs() > 1e-9 * grid.length() {
        return Err(Error::InvalidGrid(format!("grid [{}, {}] is not symmetric about 0", grid.x0, grid.x_max())));
    }
    Ok(())
}

/// Index of the first sample with `x >= 0` on a symmetric free grid, and the
/// non-negative positions from there on, computed from the index so that
/// mirrored samples get bit-identical values.
fn half_line_targets(grid: &Grid) -> (usize, Vec<f64>) {
    let start = grid.n / 2;
    let centre = 0.5 * (grid.n - 1) as f64;
    let xs = (start..grid.n).map(|k| (k as f64 - centre) * grid.dx).collect();
    (start, xs)
}

/// Integrate `y' = rhs(y)` from `y(x_start) = start` along ascending `targets`,
/// stopping (and padding with `1`) once `1 - y` drops below [`TAIL_CUTOFF`].
fn integrate_to_one<F: Fn(f64) -> f64>(rhs: F, x_start: f64, start: f64, targets: &[f64], max_step: f64) -> Vec<f64> {
    let f = |_x: f64, y: &[f64; 1]| [rhs(y[0])];
    let mut out = Vec::with_capacity(targets.len());
    let mut x = x_start;
    let mut y = start;
    let mut saturated = false;
    for &target in targets {
        if !saturated {
            y = rk4_span(&f, x, target, [y], max_step)[0];
            x = target;
            if 1.0 - y < TAIL_CUTOFF {
                saturated = true;
            }
        }
        out.push(if saturated { 1.0 } else { y });
    }
    out
}

/// Spread values on the non-negative half back over the symmetric grid with the given parity.
fn reflect(grid: &Grid, start: usize, half: &[f64], odd: bool) -> Vec<f64> {
    (0..grid.n)
        .map(|j| {
            let mirror = grid.n - 1 - j;
            if j >= mirror {
                half[j - start]
            } else if odd {
                -half[mirror - start]
            } else {
                half[mirror - start]
            }
        })
        .collect()
}

/// The real, odd, increasing stationary wave connecting `-1` to `1`.
///
/// The grid is either a free grid symmetric about `0` or a `DirichletOdd` half-line grid.
pub fn black_soliton(p: &Params, grid: &Grid) -> Result<WaveProfile> {
    if !(p.lambda > 0.0) {
        return Err(Error::Domain("lambda must be positive".into()));
    }
    match grid.bc {
        Boundary::DirichletOdd if grid.x0 == 0.0 => {}
        Boundary::DirichletOdd => return Err(Error::InvalidGrid("odd grid must start at 0".into())),
        _ => require_symmetric(grid)?,
    }
    let sqrt_lambda = p.lambda.sqrt();
    // continued through phi = 1 with the sign of 1 - phi so the stepper cannot overshoot
    let rhs = |phi: f64| sqrt_lambda * (1.0 - phi).signum() * potential_unchecked(phi * phi).sqrt();
    let (values, theta) = match grid.bc {
        Boundary::DirichletOdd => {
            let half = integrate_to_one(rhs, 0.0, 0.0, &grid.points(), grid.dx / SUBSTEPS);
            (half, vec![0.0; grid.n])
        }
        _ => {
            let (start, targets) = half_line_targets(grid);
            let half = integrate_to_one(rhs, 0.0, 0.0, &targets, grid.dx / SUBSTEPS);
            let theta = (0..grid.n).map(|j| if j < grid.n - 1 - j { PI } else { 0.0 }).collect();
            (reflect(grid, start, &half, true), theta)
        }
    };
    let phi: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Ok(WaveProfile::assemble(*grid, phi, theta, *p, None, 0.0))
}

/// Even modulus `rho_c` of the traveling wave, minimum `y0` at `x = 0`.
pub fn traveling_modulus(p: &Params, grid: &Grid) -> Result<Vec<f64>> {
    if p.c == 0.0 {
        return Err(Error::WrongBranch("c = 0 is the black soliton".into()));
    }
    p.check_below_threshold()?;
    let cp = find_critical_points(p)?;
    traveling_modulus_with_force(p, grid, cp.y0, |rho| f_c_unchecked(rho, p))
}

/// [`traveling_modulus`] with an arbitrary force in `rho'' = force(rho)`.
///
/// Near the turning point the second-order system is integrated; once the
/// modulus is half way between `y0` and `1` the first-order form
/// `rho' = sqrt(g_c(rho))` takes over, because the second-order flow leaves
/// the separatrix exponentially fast in the tail.
pub fn traveling_modulus_with_force<F: Fn(f64) -> f64>(p: &Params, grid: &Grid, y0: f64, force: F) -> Result<Vec<f64>> {
    require_symmetric(grid)?;
    let (start, targets) = half_line_targets(grid);
    let max_step = grid.dx / SUBSTEPS;
    let switch_level = 0.5 * (y0 + 1.0);
    let second = |_x: f64, s: &[f64; 2]| [s[1], force(s[0])];

    let mut half = Vec::with_capacity(targets.len());
    let mut state = [y0, 0.0];
    let mut x = 0.0;
    let mut idx = 0;
    while idx < targets.len() {
        let target = targets[idx];
        // advance sub-step by sub-step so the switch happens as soon as the level is crossed
        let steps = ((target - x) / max_step).ceil().max(1.0) as usize;
        let h = (target - x) / steps as f64;
        let mut crossed = false;
        for _ in 0..steps {
            state = rk4_span(&second, x, x + h, state, max_step);
            x += h;
            if !(state[0] > 0.0) || !state[0].is_finite() || !state[1].is_finite() {
                return Err(Error::Domain(format!("modulus left (0, inf) at x = {x}")));
            }
            if state[0] >= switch_level {
                crossed = true;
                break;
            }
        }
        if crossed {
            break;
        }
        half.push(state[0]);
        idx += 1;
    }
    if idx < targets.len() {
        let rhs = |rho: f64| (1.0 - rho).signum() * g_c_unchecked(rho, p).max(0.0).sqrt();
        half.extend(integrate_to_one(rhs, x, state[0], &targets[idx..], max_step));
    }
    Ok(reflect(grid, start, &half, false))
}

/// Phase of the traveling wave from `theta' = (c/2)(1 - 1/rho^2)`, with `theta(0) = theta0`.
///
/// Cumulative trapezoid rule with the Euler-Maclaurin end correction, which
/// lifts it to fourth order. `rho` must be even on a grid symmetric about `0`.
pub fn traveling_phase(rho: &[f64], grid: &Grid, p: &Params, theta0: f64) -> Result<Vec<f64>> {
    require_symmetric(grid)?;
    if rho.len() != grid.n {
        return Err(Error::InvalidGrid("modulus length does not match the grid".into()));
    }
    if rho.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::Domain("modulus touches zero, the phase is undefined".into()));
    }
    let q: Vec<f64> = rho.iter().map(|r| 0.5 * p.c * (1.0 - 1.0 / (r * r))).collect();
    let dq = finite_difference(&q, grid.dx, 1);
    let h = grid.dx;
    let mut cumulative = vec![0.0; grid.n];
    let mut trap = 0.0;
    for j in 1..grid.n {
        trap += 0.5 * h * (q[j - 1] + q[j]);
        cumulative[j] = trap - h * h / 12.0 * (dq[j] - dq[0]);
    }
    // the integrand is even, so the value at the centre is half the total
    let centre = 0.5 * cumulative[grid.n - 1];
    Ok(cumulative.into_iter().map(|v| theta0 + v - centre).collect())
}

/// The traveling wave `rho_c e^{i theta_c}`; dispatches to [`black_soliton`] for `c = 0`.
pub fn traveling_wave(p: &Params, grid: &Grid, theta0: f64) -> Result<WaveProfile> {
    p.check_below_threshold()?;
    if p.c == 0.0 {
        let mut w = black_soliton(p, grid)?;
        let rot = Complex64::from_polar(1.0, theta0);
        w.phi.iter_mut().for_each(|z| *z *= rot);
        w.theta.iter_mut().for_each(|t| *t += theta0);
        w.theta0 = theta0;
        return Ok(w);
    }
    let cp = find_critical_points(p)?;
    let rho = traveling_modulus_with_force(p, grid, cp.y0, |r| f_c_unchecked(r, p))?;
    let theta = traveling_phase(&rho, grid, p, theta0)?;
    let phi = rho.iter().zip(&theta).map(|(&r, &t)| Complex64::from_polar(r, t)).collect();
    Ok(WaveProfile::assemble(*grid, phi, theta, *p, Some(cp.y0), theta0))
}

/// Closed-form dark soliton of the cubic equation `i u_t + u_xx = (|u|^2 - 1) u`:
/// `a tanh(a x / sqrt 2) + i c / sqrt 2` with `a = sqrt(1 - c^2/2)`.
///
/// The returned profile carries `lambda = 1` as a placeholder.
pub fn gp_dark_soliton(c: f64, grid: &Grid) -> Result<WaveProfile> {
    let p = Params::new(1.0, c)?;
    p.check_below_threshold()?;
    let a = (1.0 - 0.5 * c * c).sqrt();
    let phi: Vec<Complex64> = grid
        .points()
        .into_iter()
        .map(|x| Complex64::new(a * (a * x * FRAC_1_SQRT_2).tanh(), c / SQRT_2))
        .collect();
    let theta = phi.iter().map(|z| z.arg()).collect();
    let y0 = if c != 0.0 { Some(c.abs() / SQRT_2) } else { None };
    Ok(WaveProfile::assemble(*grid, phi, theta, p, y0, 0.0))
}

/// Pointwise residual `-ic phi' + phi'' - lambda phi ln|phi|^2` by fourth-order
/// finite differences, on every grid point (edge values use one-sided stencils).
pub fn stationary_residual_samples(w: &WaveProfile) -> Result<Vec<f64>> {
    let (phi, h) = match w.grid.bc {
        Boundary::DirichletOdd => {
            let ext = w.to_grid_function().odd_extension()?;
            (ext.into_values(), w.grid.dx)
        }
        _ => (w.phi.clone(), w.grid.dx),
    };
    let d1 = finite_difference(&phi, h, 1);
    let d2 = finite_difference(&phi, h, 2);
    let ic = Complex64::new(0.0, w.p.c);
    let res: Vec<f64> = phi
        .iter()
        .zip(d1.iter().zip(&d2))
        .map(|(&z, (&a, &b))| (-ic * a + b - w.p.lambda * log_nonlinearity(z, 0.0)).norm())
        .collect();
    Ok(match w.grid.bc {
        Boundary::DirichletOdd => res[2 * w.grid.n..3 * w.grid.n].to_vec(),
        _ => res,
    })
}

/// Max of [`stationary_residual_samples`] over interior points (two points
/// dropped at each end of a free grid).
pub fn stationary_residual(w: &WaveProfile) -> Result<f64> {
    let res = stationary_residual_samples(w)?;
    let range = match w.grid.bc {
        Boundary::Free => 2..res.len() - 2,
        _ => 0..res.len(),
    };
    Ok(res[range].iter().copied().fold(0.0, f64::max))
}

/// Largest `|(phi')^2 - lambda F(phi^2)|` over interior points, divided by
/// `max lambda F(phi^2)`. Only meaningful for the black soliton.
pub fn energy_identity_defect(w: &WaveProfile) -> f64 {
    let re: Vec<f64> = w.phi.iter().map(|z| z.re).collect();
    let d = finite_difference(&re, w.grid.dx, 1);
    let pot: Vec<f64> = re.iter().map(|v| w.p.lambda * potential_unchecked(v * v)).collect();
    let scale = pot.iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let worst = (2..w.grid.n.saturating_sub(2)).map(|j| (d[j] * d[j] - pot[j]).abs()).fold(0.0, f64::max);
    worst / scale
}

/// Largest `|(eta')^2 / 2 - h_c(eta)|` over interior points.
pub fn eta_identity_defect(w: &WaveProfile) -> f64 {
    let d = finite_difference(&w.eta, w.grid.dx, 1);
    (2..w.grid.n.saturating_sub(2))
        .map(|j| (0.5 * d[j] * d[j] - h_c_unchecked(w.eta[j], &w.p)).abs())
        .fold(0.0, f64::max)
}

/// Exponential rate of `1 - rho -> 0` on the right tail, fitted by least
/// squares on the samples with `1 - rho` in `[1e-10, 1e-4]`.
pub fn tail_decay_rate(w: &WaveProfile) -> Result<f64> {
    let pts: Vec<(f64, f64)> = (0..w.grid.n)
        .filter(|&j| w.grid.x(j) > 0.0)
        .filter_map(|j| {
            let gap = 1.0 - w.rho[j];
            (1e-10..=1e-4).contains(&gap).then(|| (w.grid.x(j), gap.ln()))
        })
        .collect();
    if pts.len() < 3 {
        return Err(Error::Domain("too few tail samples to fit a decay rate".into()));
    }
    let n = pts.len() as f64;
    let xm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let num: f64 = pts.iter().map(|p| (p.0 - xm) * (p.1 - ym)).sum();
    let den: f64 = pts.iter().map(|p| (p.0 - xm) * (p.0 - xm)).sum();
    Ok(-num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::g_c;

    fn p(lambda: f64, c: f64) -> Params {
        Params::new(lambda, c).unwrap()
    }

    #[test]
    fn black_soliton_basic_shape() {
        let grid = Grid::symmetric(40.0, 4001).unwrap();
        let w = black_soliton(&p(1.0, 0.0), &grid).unwrap();
        let mid = grid.index_of(0.0).unwrap();
        assert_eq!(w.phi[mid].re, 0.0);
        for j in 0..grid.n {
            assert_eq!(w.phi[j].re, -w.phi[grid.n - 1 - j].re);
            assert!(w.phi[j].re.abs() < 1.0 || w.phi[j].re.abs() == 1.0 && grid.x(j).abs() > 15.0);
        }
        // phi(x) = x + x^3 ln|x| / 3 + O(x^3) near the zero
        let h = grid.dx;
        assert!((w.phi[mid + 1].re / h - 1.0).abs() < h * h * h.ln().abs());
        assert!((w.phi[grid.n - 1].re - 1.0).abs() < 1e-8);
        // tail 1 - phi ~ e^{-sqrt(2 lambda) x}
        let rate = tail_decay_rate(&w).unwrap();
        assert!((rate / 2f64.sqrt() - 1.0).abs() < 0.1, "rate {rate}");
        // the x^3 ln|x| term caps the difference identity at O(dx^2)
        assert!(energy_identity_defect(&w) < 1e-3);
    }

    #[test]
    fn black_soliton_scales_with_lambda() {
        // phi_lambda(x) = phi_1(sqrt(lambda) x)
        let narrow = Grid::symmetric(20.0, 2001).unwrap();
        let wide = Grid::symmetric(40.0, 2001).unwrap();
        let w4 = black_soliton(&p(4.0, 0.0), &narrow).unwrap();
        let w1 = black_soliton(&p(1.0, 0.0), &wide).unwrap();
        for j in 0..narrow.n {
            assert!((w4.phi[j] - w1.phi[j]).norm() < 1e-9);
        }
    }

    #[test]
    fn black_soliton_rejects_bad_grids() {
        let grid = Grid::free(-5.0, 10.0, 101).unwrap();
        assert!(black_soliton(&p(1.0, 0.0), &grid).is_err());
        let grid = Grid::periodic(-5.0, 10.0, 100).unwrap();
        assert!(black_soliton(&p(1.0, 0.0), &grid).is_err());
    }

    #[test]
    fn dirichlet_odd_black_soliton_matches_free() {
        let odd = Grid::dirichlet_odd(20.0, 800).unwrap();
        let free = Grid::symmetric(40.0, 3201).unwrap();
        let wo = black_soliton(&p(1.0, 0.0), &odd).unwrap();
        let wf = black_soliton(&p(1.0, 0.0), &free).unwrap();
        for j in 0..odd.n {
            let k = free.index_of(odd.x(j)).unwrap();
            assert!((wo.phi[j] - wf.phi[k]).norm() < 1e-9);
        }
    }

    #[test]
    fn traveling_modulus_turning_point_and_symmetry() {
        let params = p(1.0, 1.0);
        let grid = Grid::symmetric(40.0, 4001).unwrap();
        let rho = traveling_modulus(&params, &grid).unwrap();
        let y0 = find_critical_points(&params).unwrap().y0;
        let mid = grid.index_of(0.0).unwrap();
        assert_eq!(rho[mid], y0);
        for j in 0..grid.n {
            assert_eq!(rho[j], rho[grid.n - 1 - j]);
            assert!(rho[j] >= y0 && rho[j] <= 1.0);
        }
        let d = finite_difference(&rho, grid.dx, 1);
        assert!(d[mid].abs() < 1e-9);
        // (rho')^2 = g_c(rho) from independent finite differences
        let worst = (2..grid.n - 2)
            .map(|j| (d[j] * d[j] - g_c(rho[j], &params).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "residual {worst}");
    }

    #[test]
    fn traveling_modulus_errors() {
        let grid = Grid::symmetric(20.0, 201).unwrap();
        assert!(matches!(traveling_modulus(&p(1.0, 0.0), &grid), Err(Error::WrongBranch(_))));
        assert!(matches!(traveling_modulus(&p(1.0, 1.5), &grid), Err(Error::VelocityAboveThreshold { .. })));
    }

    #[test]
    fn phase_trivial_cases() {
        let grid = Grid::symmetric(10.0, 101).unwrap();
        let ones = vec![1.0; grid.n];
        let theta = traveling_phase(&ones, &grid, &p(1.0, 1.0), 0.3).unwrap();
        assert!(theta.iter().all(|&t| (t - 0.3).abs() < 1e-15));
        let bump: Vec<f64> = grid.points().iter().map(|x| 1.0 - 0.3 * (-x * x).exp()).collect();
        let theta = traveling_phase(&bump, &grid, &p(1.0, 0.0), -1.0).unwrap();
        assert!(theta.iter().all(|&t| (t + 1.0).abs() < 1e-15));
        let mut zero = ones.clone();
        zero[50] = 0.0;
        assert!(traveling_phase(&zero, &grid, &p(1.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn traveling_wave_profile() {
        let params = p(1.0, 1.0);
        let grid = Grid::symmetric(40.0, 4001).unwrap();
        let w = traveling_wave(&params, &grid, 0.0).unwrap();
        let y0 = w.y0.unwrap();
        assert!(y0 > 0.61 && y0 < 0.62);
        assert!((w.min_modulus() - y0).abs() < 1e-12);
        let mid = grid.index_of(0.0).unwrap();
        assert!(w.theta[mid].abs() < 1e-12);
        // c > 0 and rho < 1 give a strictly decreasing phase
        for j in 1..grid.n {
            if w.rho[j] < 1.0 - 1e-9 && w.rho[j - 1] < 1.0 - 1e-9 {
                assert!(w.theta[j] < w.theta[j - 1]);
            }
        }
        assert!(w.phase_winding() < 0.0 && w.phase_winding().is_finite());
        // eta identity: (eta')^2 / 2 = h_c(eta)
        let worst = eta_identity_defect(&w);
        assert!(worst < 1e-7, "eta identity {worst}");
        let res = stationary_residual(&w).unwrap();
        assert!(res < 1e-5, "residual {res}");
    }

    #[test]
    fn traveling_wave_dispatch_and_threshold() {
        let grid = Grid::symmetric(20.0, 401).unwrap();
        assert!(matches!(
            traveling_wave(&p(1.0, 2f64.sqrt()), &grid, 0.0),
            Err(Error::VelocityAboveThreshold { .. })
        ));
        let w = traveling_wave(&p(1.0, 0.0), &grid, 0.0).unwrap();
        assert_eq!(w.min_modulus(), 0.0);
        assert!(w.y0.is_none());
    }

    #[test]
    fn gp_dark_soliton_values() {
        let x_half = SQRT_2 * 0.5f64.atanh();
        let grid = Grid::free(-x_half, x_half, 101).unwrap();
        let w = gp_dark_soliton(0.0, &grid).unwrap();
        assert!((w.phi[grid.n - 1].re - 0.5).abs() < 1e-15);

        let grid = Grid::symmetric(60.0, 601).unwrap();
        let w = gp_dark_soliton(1.0, &grid).unwrap();
        assert!((w.min_modulus() - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((w.rho[0] - 1.0).abs() < 1e-8 && (w.rho[grid.n - 1] - 1.0).abs() < 1e-8);
        assert!(matches!(gp_dark_soliton(1.5, &grid), Err(Error::VelocityAboveThreshold { .. })));
    }

    #[test]
    fn residual_of_constants_is_zero() {
        let grid = Grid::symmetric(10.0, 101).unwrap();
        for alpha in [0.0, 1.3] {
            let phi = vec![Complex64::from_polar(1.0, alpha); grid.n];
            let w = WaveProfile::assemble(grid, phi, vec![alpha; grid.n], p(1.0, 0.7), None, alpha);
            assert!(stationary_residual(&w).unwrap() < 1e-12);
        }
    }
}
