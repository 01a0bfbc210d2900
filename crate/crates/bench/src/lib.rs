//! Benchmark inputs shared by the criterion targets.

use loggp::{Complex64, Grid, GridFunction};

/// `1 + 0.3 e^{-x^2} + 0.2 i x e^{-x^2/2}` on a periodic box of `n` points over `[-40, 40)`.
pub fn smooth_bump(n: usize) -> GridFunction {
    let grid = Grid::periodic(-40.0, 80.0, n).expect("valid grid");
    GridFunction::from_fn(grid, |x| Complex64::new(1.0 + 0.3 * (-x * x).exp(), 0.2 * x * (-0.5 * x * x).exp()))
}
