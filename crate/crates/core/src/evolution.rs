//! Strang split-step solver.
//!
//! The kinetic part is solved exactly in Fourier space and the nonlinear part
//! exactly in physical space: `i u_t = N(|u|) u` keeps `|u|` fixed pointwise,
//! so its flow over `dt` is the phase rotation `u e^{-i dt N(|u|)}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::energy::{energy_report, EnergyReport};
use crate::error::{Error, Result};
use crate::grid::{Boundary, Grid, GridFunction};
use crate::profiles::WaveProfile;
use crate::scalars::Params;
use crate::spectral::Spectral;

/// At `eps = 0` samples below this modulus are not rotated.
pub const VACUUM_CUTOFF: f64 = 1e-150;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Nonlinearity {
    /// `lambda u ln|u|^2`
    Log,
    /// `lambda u ln(|u|^2 + eps)`
    LogRegularized,
    /// `(|u|^2 - 1) u`
    CubicGp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub p: Params,
    pub dt: f64,
    pub t_end: f64,
    pub eps: f64,
    pub nonlinearity: Nonlinearity,
    /// Diagnostics are recorded every this many steps (and at the last step).
    pub record_every: usize,
    /// Keep a copy of the field at every record.
    #[serde(default)]
    pub snapshots: bool,
}

impl EvolutionConfig {
    pub fn new(p: Params, dt: f64, t_end: f64, nonlinearity: Nonlinearity) -> Result<Self> {
        let cfg = Self { p, dt, t_end, eps: 0.0, nonlinearity, record_every: 100, snapshots: false };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Configuration for the `ln(|u|^2 + eps)` nonlinearity.
    pub fn regularized(p: Params, dt: f64, t_end: f64, eps: f64) -> Result<Self> {
        let cfg = Self { p, dt, t_end, eps, nonlinearity: Nonlinearity::LogRegularized, record_every: 100, snapshots: false };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_eps(mut self, eps: f64) -> Result<Self> {
        self.eps = eps;
        self.validate()?;
        Ok(self)
    }

    pub fn with_record_every(mut self, every: usize) -> Result<Self> {
        self.record_every = every;
        self.validate()?;
        Ok(self)
    }

    pub fn with_snapshots(mut self, on: bool) -> Self {
        self.snapshots = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Domain(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= self.dt) || !self.t_end.is_finite() {
            return Err(Error::Domain(format!("t_end = {} must be at least dt = {}", self.t_end, self.dt)));
        }
        if !(self.eps >= 0.0) || !self.eps.is_finite() {
            return Err(Error::Domain(format!("eps must be non-negative, got {}", self.eps)));
        }
        if self.nonlinearity == Nonlinearity::LogRegularized && self.eps == 0.0 {
            return Err(Error::Domain("the regularized nonlinearity needs eps > 0".into()));
        }
        if self.record_every == 0 {
            return Err(Error::Domain("record_every must be positive".into()));
        }
        Ok(())
    }

    /// Number of steps, `t_end / dt` rounded to the nearest integer.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round().max(1.0) as usize
    }

    /// `k_max^2 dt / pi` on the grid the propagator works on. Above about one,
    /// grid-scale modes resonate with the nonlinear rotation and grow from
    /// whatever seeds them.
    pub fn resonance_number(&self, grid: &Grid) -> f64 {
        let k_max = PI / grid.dx;
        k_max * k_max * self.dt / PI
    }

    fn eps_effective(&self) -> f64 {
        match self.nonlinearity {
            Nonlinearity::LogRegularized => self.eps,
            _ => 0.0,
        }
    }

    fn total(&self, e: &EnergyReport) -> f64 {
        match self.nonlinearity {
            Nonlinearity::CubicGp => e.total_gp,
            _ => e.total_loggp,
        }
    }
}

/// Diagnostics of a run.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub energy_series: Vec<EnergyReport>,
    /// `||u(t) - u(0)||_{L^2}`
    pub mass_defect_series: Vec<f64>,
    /// `||u_xx(t)||_{L^2}`
    pub h2_series: Vec<f64>,
    /// Discrete `||u(t)||_{L^2}^2` on the periodic box; only meaningful on bounded boxes.
    pub l2_series: Vec<f64>,
    /// `max_t |E(t) - E(0)| / max(|E(0)|, 1)` of the conserved energy.
    pub energy_drift: f64,
    pub steps: usize,
    #[serde(skip)]
    pub final_state: GridFunction,
    #[serde(skip)]
    pub snapshots: Vec<GridFunction>,
}

impl Trajectory {
    /// Largest recorded `||u_xx||`.
    pub fn h2_max(&self) -> f64 {
        self.h2_series.iter().copied().fold(0.0, f64::max)
    }
}

/// Reusable split-step propagator for one grid and configuration.
pub struct SplitStep {
    grid: Grid,
    work_grid: Grid,
    spectral: Spectral,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
    cfg: EvolutionConfig,
}

impl SplitStep {
    pub fn new(grid: &Grid, cfg: &EvolutionConfig) -> Result<Self> {
        cfg.validate()?;
        let work_grid = match grid.bc {
            Boundary::Periodic => *grid,
            Boundary::DirichletOdd => grid.odd_extension()?,
            Boundary::Free => return Err(Error::UnsupportedBoundary(Boundary::Free)),
        };
        let spectral = Spectral::new(work_grid.n, work_grid.length());
        let mult = |t: f64| -> Vec<Complex64> {
            spectral.wavenumbers().iter().map(|k| Complex64::from_polar(1.0, -k * k * t)).collect()
        };
        let half = mult(0.5 * cfg.dt);
        let full = mult(cfg.dt);
        Ok(Self { grid: *grid, work_grid, spectral, half, full, cfg: *cfg })
    }

    fn to_work(&self, u: &GridFunction) -> Result<Vec<Complex64>> {
        if *u.grid() != self.grid {
            return Err(Error::InvalidGrid("field does not live on the propagator grid".into()));
        }
        Ok(match self.grid.bc {
            Boundary::DirichletOdd => u.odd_extension()?.into_values(),
            _ => u.values().to_vec(),
        })
    }

    fn from_work(&self, values: Vec<Complex64>) -> Result<GridFunction> {
        match self.grid.bc {
            Boundary::DirichletOdd => {
                let ext = GridFunction::from_parts_unchecked(self.work_grid, values);
                GridFunction::restrict_from_extension(&ext, self.grid)
            }
            _ => Ok(GridFunction::from_parts_unchecked(self.grid, values)),
        }
    }

    fn nonlinear(&self, values: &mut [Complex64]) {
        let dt = self.cfg.dt;
        let lambda = self.cfg.p.lambda;
        let eps = self.cfg.eps_effective();
        for z in values.iter_mut() {
            let r2 = z.norm_sqr();
            let rate = match self.cfg.nonlinearity {
                Nonlinearity::CubicGp => r2 - 1.0,
                _ if eps == 0.0 && r2.sqrt() < VACUUM_CUTOFF => 0.0,
                _ => lambda * (r2 + eps).ln(),
            };
            *z *= Complex64::from_polar(1.0, -rate * dt);
        }
    }

    /// Advance `steps` Strang steps; consecutive half kinetic steps are merged.
    /// On a non-finite sample returns the offending step counted from `first_step`.
    fn advance(&self, values: &mut [Complex64], steps: usize, first_step: usize) -> Result<()> {
        if steps == 0 {
            return Ok(());
        }
        self.spectral.apply_multiplier(values, &self.half);
        for s in 0..steps {
            self.nonlinear(values);
            let m = if s + 1 == steps { &self.half } else { &self.full };
            self.spectral.apply_multiplier(values, m);
            if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite { step: first_step + s + 1 });
            }
        }
        Ok(())
    }

    pub fn step(&self, u: &GridFunction) -> Result<GridFunction> {
        let mut v = self.to_work(u)?;
        self.advance(&mut v, 1, 0)?;
        self.from_work(v)
    }
}

/// One Strang step: half kinetic, full nonlinear rotation, half kinetic.
pub fn strang_step(u: &GridFunction, cfg: &EvolutionConfig) -> Result<GridFunction> {
    SplitStep::new(u.grid(), cfg)?.step(u)
}

fn h2_norm(u: &GridFunction) -> Result<f64> {
    Ok(u.derivative(2)?.l2_norm())
}

/// Evolve `u0` to `t_end`, recording diagnostics every `record_every` steps.
pub fn evolve(u0: &GridFunction, cfg: &EvolutionConfig) -> Result<Trajectory> {
    let prop = SplitStep::new(u0.grid(), cfg)?;
    let steps = cfg.steps();
    let mut work = prop.to_work(u0)?;

    let mut traj = Trajectory {
        times: Vec::new(),
        energy_series: Vec::new(),
        mass_defect_series: Vec::new(),
        h2_series: Vec::new(),
        l2_series: Vec::new(),
        energy_drift: 0.0,
        steps,
        final_state: u0.clone(),
        snapshots: Vec::new(),
    };
    let record = |traj: &mut Trajectory, t: f64, u: &GridFunction| -> Result<()> {
        let e = energy_report(u, &cfg.p)?;
        traj.times.push(t);
        traj.energy_series.push(e);
        traj.mass_defect_series.push(u.l2_distance(u0)?);
        traj.h2_series.push(h2_norm(u)?);
        traj.l2_series.push(u.l2_norm().powi(2));
        let e0 = cfg.total(&traj.energy_series[0]);
        let drift = (cfg.total(&e) - e0).abs() / e0.abs().max(1.0);
        traj.energy_drift = traj.energy_drift.max(drift);
        if cfg.snapshots {
            traj.snapshots.push(u.clone());
        }
        Ok(())
    };
    record(&mut traj, 0.0, u0)?;

    let mut done = 0;
    while done < steps {
        let chunk = cfg.record_every.min(steps - done);
        prop.advance(&mut work, chunk, done)?;
        done += chunk;
        let u = prop.from_work(work.clone())?;
        record(&mut traj, done as f64 * cfg.dt, &u)?;
        if done == steps {
            traj.final_state = u;
        }
    }
    Ok(traj)
}

fn wrap_angle(a: f64) -> f64 {
    (a + PI).rem_euclid(2.0 * PI) - PI
}

/// Periodic box holding a wave and its mirror image.
#[derive(Debug, Clone)]
pub struct PairBox {
    pub field: GridFunction,
    pub separation: f64,
    pub velocity: f64,
    spectral: Spectral,
}

impl PairBox {
    /// The composite expected at time `t`: the wave on `[-S/2, S/2)` moved by
    /// `+ct`, its mirror image on `[S/2, 3S/2)` moved by `-ct`.
    pub fn translated(&self, t: f64) -> Result<GridFunction> {
        let shift = self.velocity * t;
        if shift == 0.0 {
            return Ok(self.field.clone());
        }
        let forward = self.spectral.translate(self.field.values(), shift);
        let backward = self.spectral.translate(self.field.values(), -shift);
        let m = self.field.len() / 2;
        let values = forward[..m].iter().chain(&backward[m..]).copied().collect();
        GridFunction::new(*self.field.grid(), values)
    }
}

/// Periodize a profile on `[-S/2, 3S/2)`: `w(x)` on the first half and the
/// mirror image `w(S - x)` on the second.
///
/// The mirror image solves the profile equation with velocity `-c` and winds
/// the phase the other way, so the composite closes up periodically with no
/// phase correction; the two halves meet where both tails are flat.
pub fn make_pair_box(w: &WaveProfile, separation: f64) -> Result<PairBox> {
    if w.grid.bc != Boundary::Free {
        return Err(Error::UnsupportedBoundary(w.grid.bc));
    }
    let half = 0.5 * separation;
    let (lo, hi) = match (w.grid.index_of(-half), w.grid.index_of(half)) {
        (Some(lo), Some(hi)) if hi > lo => (lo, hi),
        _ => {
            return Err(Error::InvalidGrid(format!(
                "separation {separation} does not match grid points of the profile"
            )))
        }
    };
    let deviation = (w.rho[lo] - 1.0).abs().max((w.rho[hi] - 1.0).abs());
    if deviation > 1e-6 {
        return Err(Error::Gluing { deviation });
    }
    let m = hi - lo;
    let grid = Grid::new(-half, w.grid.dx, 2 * m, Boundary::Periodic)?;
    let mut values = Vec::with_capacity(2 * m);
    values.extend_from_slice(&w.phi[lo..hi]);
    // x = S/2 + k dx mirrors to S - x = S/2 - k dx
    values.extend((0..m).map(|k| w.phi[hi - k]));
    Ok(PairBox {
        field: GridFunction::new(grid, values)?,
        separation,
        velocity: w.p.c,
        spectral: Spectral::new(2 * m, grid.length()),
    })
}

/// Least-squares slope of `arg <u(t), reference(t)>` against `t` over the
/// stored snapshots, with `<a, b> = int a conj(b)`.
pub fn frequency_probe<F>(traj: &Trajectory, reference: F) -> Result<f64>
where
    F: Fn(f64) -> Result<GridFunction>,
{
    if traj.snapshots.len() != traj.times.len() || traj.snapshots.len() < 2 {
        return Err(Error::Domain("frequency probe needs a trajectory with snapshots".into()));
    }
    let mut phases: Vec<f64> = Vec::with_capacity(traj.times.len());
    for (&t, u) in traj.times.iter().zip(&traj.snapshots) {
        let inner = u.zip_with(&reference(t)?, |a, b| a * b.conj())?.integrate();
        let mut phase = inner.arg();
        if let Some(&prev) = phases.last() {
            phase = prev + wrap_angle(phase - prev);
        }
        phases.push(phase);
    }
    let n = phases.len() as f64;
    let t_mean = traj.times.iter().sum::<f64>() / n;
    let p_mean = phases.iter().sum::<f64>() / n;
    let (mut num, mut den) = (0.0, 0.0);
    for (&t, &ph) in traj.times.iter().zip(&phases) {
        num += (t - t_mean) * (ph - p_mean);
        den += (t - t_mean) * (t - t_mean);
    }
    Ok(num / den)
}
