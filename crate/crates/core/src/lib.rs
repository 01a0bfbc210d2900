//! Numerical laboratory for the logarithmic Gross-Pitaevskii equation
//!
//! ```text
//! i u_t + u_xx = lambda u ln|u|^2,    |u| -> 1 as |x| -> infinity
//! ```
//!
//! The crate computes the stationary (black) and traveling (dark) waves of
//! this equation, evaluates the energy functionals attached to it, and evolves
//! it in time with two independent schemes: a Strang split-step spectral
//! solver and a Hermite-Galerkin projection.

pub mod energy;
pub mod error;
pub mod evolution;
pub mod galerkin;
pub mod grid;
pub mod ode;
pub mod profiles;
pub mod scalars;
pub mod spectral;

pub use error::{Error, Result};
pub use evolution::{EvolutionConfig, Nonlinearity, Trajectory};
pub use grid::{Boundary, Grid, GridFunction};
pub use num_complex::Complex64;
pub use profiles::WaveProfile;
pub use scalars::{CriticalPoints, Params};
