//! Discrete energy functionals.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{integrate_real, Grid, GridFunction};
use crate::scalars::{potential_unchecked, Params};

/// Below this modulus the derivative of `|u|` is taken to be zero.
pub const VACUUM_GUARD: f64 = 1e-12;

/// Decomposition of the energies of a sampled field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    /// `||u'||^2`
    pub kinetic: f64,
    /// `lambda * int F(|u|^2)`
    pub pot_log: f64,
    /// `1/2 int (|u|^2 - 1)^2`
    pub pot_gl: f64,
    /// `int (|u| - 1)^2 ln(2 + |u|)`
    pub e_pot_hat: f64,
    /// `kinetic + pot_log`
    pub total_loggp: f64,
    /// `kinetic + pot_gl`
    pub total_gp: f64,
}

impl EnergyReport {
    /// Build a report from samples and an externally computed derivative.
    pub fn from_samples(grid: &Grid, u: &[Complex64], du: &[Complex64], p: &Params) -> Self {
        let kin: Vec<f64> = du.iter().map(|d| d.norm_sqr()).collect();
        let mut log = Vec::with_capacity(u.len());
        let mut gl = Vec::with_capacity(u.len());
        let mut hat = Vec::with_capacity(u.len());
        for z in u {
            let r2 = z.norm_sqr();
            let r = z.norm();
            log.push(potential_unchecked(r2));
            gl.push(0.5 * (r2 - 1.0) * (r2 - 1.0));
            hat.push((r - 1.0) * (r - 1.0) * (2.0 + r).ln());
        }
        let kinetic = integrate_real(grid, &kin);
        let pot_log = p.lambda * integrate_real(grid, &log);
        let pot_gl = integrate_real(grid, &gl);
        Self {
            kinetic,
            pot_log,
            pot_gl,
            e_pot_hat: integrate_real(grid, &hat),
            total_loggp: kinetic + pot_log,
            total_gp: kinetic + pot_gl,
        }
    }
}

pub fn energy_report(u: &GridFunction, p: &Params) -> Result<EnergyReport> {
    let du = u.derivative(1)?;
    Ok(EnergyReport::from_samples(u.grid(), u.values(), du.values(), p))
}

/// Pointwise derivative of the modulus, `Re(conj(u)/|u| u')`, zero near the vacuum.
pub fn modulus_derivative(u: &GridFunction) -> Result<Vec<f64>> {
    let du = u.derivative(1)?;
    Ok(u.values()
        .iter()
        .zip(du.values())
        .map(|(z, d)| {
            let r = z.norm();
            if r > VACUUM_GUARD {
                (z.conj() * d).re / r
            } else {
                0.0
            }
        })
        .collect())
}

/// `|| |u| - 1 ||_{H^1}^2 = || |u| - 1 ||_{L^2}^2 + || (|u|)' ||_{L^2}^2`.
pub fn h1_modulus_distance(u: &GridFunction) -> Result<f64> {
    let dmod = modulus_derivative(u)?;
    let l2: Vec<f64> = u.values().iter().map(|z| (z.norm() - 1.0).powi(2)).collect();
    let grad: Vec<f64> = dmod.iter().map(|d| d * d).collect();
    Ok(integrate_real(u.grid(), &l2) + integrate_real(u.grid(), &grad))
}

/// Ratio of the logarithmic potential (with `lambda = 1`) to the comparison
/// functional `int (|u| - 1)^2 ln(2 + |u|)`.
pub fn equivalence_ratio(u: &GridFunction, p: &Params) -> Result<f64> {
    let report = energy_report(u, p)?;
    if report.e_pot_hat <= 1e-30 * u.grid().length() {
        return Err(Error::TrivialModulus);
    }
    Ok(report.pot_log / p.lambda / report.e_pot_hat)
}

/// `|| |u| - 1 ||_{L^p}^p`.
pub fn modulus_defect_lp(u: &GridFunction, exponent: f64) -> f64 {
    let vals: Vec<f64> = u.values().iter().map(|z| (z.norm() - 1.0).abs().powf(exponent)).collect();
    integrate_real(u.grid(), &vals)
}

/// `|| u ln|u|^2 ||_{L^2}^2`.
pub fn log_moment(u: &GridFunction) -> f64 {
    let vals: Vec<f64> = u
        .values()
        .iter()
        .map(|&z| crate::scalars::log_nonlinearity(z, 0.0).norm_sqr())
        .collect();
    integrate_real(u.grid(), &vals)
}
