//! Uniform one-dimensional grids, sampled complex fields, discrete calculus
//! and the CSV layout shared by every tool in the workspace.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::Spectral;

/// Minimum number of samples on any grid.
pub const MIN_POINTS: usize = 8;

/// Boundary treatment of a [`Grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Samples `x0 + j dx` on `[x0, x0 + n dx)`, periodic of period `n dx`.
    Periodic,
    /// Cell-centred samples `x0 + (j + 1/2) dx` on `[x0, x0 + n dx]`. The field is
    /// odd about `x0` and even about `x0 + n dx`, so its symmetric extension has
    /// period `4 n dx`.
    DirichletOdd,
    /// Samples `x0 + j dx`, both endpoints included, no periodicity.
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x0: f64,
    pub dx: f64,
    pub n: usize,
    pub bc: Boundary,
}

impl Grid {
    pub fn new(x0: f64, dx: f64, n: usize, bc: Boundary) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() || !x0.is_finite() {
            return Err(Error::InvalidGrid(format!("need finite x0 and dx > 0, got x0 = {x0}, dx = {dx}")));
        }
        if n < MIN_POINTS {
            return Err(Error::InvalidGrid(format!("need at least {MIN_POINTS} samples, got {n}")));
        }
        Ok(Self { x0, dx, n, bc })
    }

    /// Periodic grid of `n` points on `[x_min, x_min + length)`.
    pub fn periodic(x_min: f64, length: f64, n: usize) -> Result<Self> {
        Self::new(x_min, length / n as f64, n, Boundary::Periodic)
    }

    /// Free grid of `n` points from `x_min` to `x_max` inclusive.
    pub fn free(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid("free grid needs two points".into()));
        }
        Self::new(x_min, (x_max - x_min) / (n - 1) as f64, n, Boundary::Free)
    }

    /// Free grid of `n` points on `[-length/2, length/2]`.
    pub fn symmetric(length: f64, n: usize) -> Result<Self> {
        Self::free(-0.5 * length, 0.5 * length, n)
    }

    /// Half-line grid `[0, length]` with odd symmetry at the origin.
    pub fn dirichlet_odd(length: f64, n: usize) -> Result<Self> {
        Self::new(0.0, length / n as f64, n, Boundary::DirichletOdd)
    }

    pub fn x(&self, j: usize) -> f64 {
        match self.bc {
            Boundary::DirichletOdd => self.x0 + (j as f64 + 0.5) * self.dx,
            _ => self.x0 + j as f64 * self.dx,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Length of the covered interval.
    pub fn length(&self) -> f64 {
        match self.bc {
            Boundary::Free => (self.n - 1) as f64 * self.dx,
            _ => self.n as f64 * self.dx,
        }
    }

    pub fn x_max(&self) -> f64 {
        self.x0 + self.length()
    }

    /// Grid of the periodic symmetric extension of a `DirichletOdd` grid:
    /// `4n` cell-centred points on `[-2L, 2L)`.
    pub fn odd_extension(&self) -> Result<Self> {
        if self.bc != Boundary::DirichletOdd {
            return Err(Error::UnsupportedBoundary(self.bc));
        }
        let period = 4.0 * self.length();
        Self::new(self.x0 - 0.5 * period + 0.5 * self.dx, self.dx, 4 * self.n, Boundary::Periodic)
    }

    /// Index of the sample at `x`, if one lies within `1e-9 dx`.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let offset = match self.bc {
            Boundary::DirichletOdd => 0.5,
            _ => 0.0,
        };
        let s = (x - self.x0) / self.dx - offset;
        let j = s.round();
        if (s - j).abs() < 1e-9 && j >= 0.0 && (j as usize) < self.n {
            Some(j as usize)
        } else {
            None
        }
    }
}

/// Complex samples on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n {
            return Err(Error::InvalidGrid(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.n
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Domain(format!("non-finite sample at index {j}")));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Grid, f: F) -> Self {
        let values = grid.points().into_iter().map(f).collect();
        Self { grid, values }
    }

    pub fn constant(grid: Grid, value: Complex64) -> Self {
        Self { grid, values: vec![value; grid.n] }
    }

    pub(crate) fn from_parts_unchecked(grid: Grid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(grid.n, values.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Pointwise combination with a function on the same grid.
    pub fn zip_with<F: Fn(Complex64, Complex64) -> Complex64>(&self, other: &Self, f: F) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("grid functions live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { grid: self.grid, values })
    }

    pub fn modulus(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    /// Periodic symmetric extension of a `DirichletOdd` function (see [`Grid::odd_extension`]).
    pub fn odd_extension(&self) -> Result<Self> {
        let ext = self.grid.odd_extension()?;
        let n = self.grid.n;
        let mut values = vec![Complex64::new(0.0, 0.0); 4 * n];
        for m in 0..2 * n {
            // m-th point of [0, 2L): reflection about L for m >= n
            let v = if m < n { self.values[m] } else { self.values[2 * n - 1 - m] };
            values[2 * n + m] = v;
            values[2 * n - 1 - m] = -v;
        }
        Ok(Self { grid: ext, values })
    }

    /// Inverse of [`GridFunction::odd_extension`]: keep the samples on `[0, L]`.
    pub fn restrict_from_extension(ext: &Self, grid: Grid) -> Result<Self> {
        if grid.bc != Boundary::DirichletOdd || ext.len() != 4 * grid.n {
            return Err(Error::InvalidGrid("not the extension of this grid".into()));
        }
        let n = grid.n;
        Ok(Self { grid, values: ext.values[2 * n..3 * n].to_vec() })
    }

    /// First or second derivative: spectral on periodic grids (and on the symmetric
    /// extension for `DirichletOdd`), fourth-order finite differences on free grids.
    pub fn derivative(&self, order: u32) -> Result<Self> {
        if order != 1 && order != 2 {
            return Err(Error::Domain(format!("derivative order must be 1 or 2, got {order}")));
        }
        match self.grid.bc {
            Boundary::Periodic => {
                let spectral = Spectral::new(self.grid.n, self.grid.length());
                Ok(Self { grid: self.grid, values: spectral.derivative(&self.values, order) })
            }
            Boundary::DirichletOdd => {
                let ext = self.odd_extension()?;
                let d = ext.derivative(order)?;
                Self::restrict_from_extension(&d, self.grid)
            }
            Boundary::Free => Ok(Self {
                grid: self.grid,
                values: finite_difference(&self.values, self.grid.dx, order),
            }),
        }
    }

    /// Quadrature over the grid: trapezoid on free grids, rectangle rule otherwise.
    pub fn integrate(&self) -> Complex64 {
        integrate_samples(&self.grid, &self.values)
    }

    /// Discrete `L^2` norm.
    pub fn l2_norm(&self) -> f64 {
        integrate_real(&self.grid, &self.values.iter().map(|v| v.norm_sqr()).collect::<Vec<_>>()).sqrt()
    }

    /// Discrete `L^2` distance to another function on the same grid.
    pub fn l2_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.zip_with(other, |a, b| a - b)?.l2_norm())
    }

    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("grid functions live on different grids".into()));
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

pub(crate) fn integrate_samples(grid: &Grid, values: &[Complex64]) -> Complex64 {
    let sum: Complex64 = values.iter().sum();
    match grid.bc {
        Boundary::Free => (sum - 0.5 * (values[0] + values[values.len() - 1])) * grid.dx,
        _ => sum * grid.dx,
    }
}

/// Real-valued quadrature with the same rule as [`GridFunction::integrate`].
pub fn integrate_real(grid: &Grid, values: &[f64]) -> f64 {
    let sum: f64 = values.iter().sum();
    match grid.bc {
        Boundary::Free => (sum - 0.5 * (values[0] + values[values.len() - 1])) * grid.dx,
        _ => sum * grid.dx,
    }
}

/// Fourth-order finite differences, one-sided near the edges.
pub(crate) fn finite_difference<T>(f: &[T], h: f64, order: u32) -> Vec<T>
where
    T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T> + Default,
{
    let n = f.len();
    let lin = |coeffs: &[(usize, f64)], scale: f64| -> T {
        coeffs.iter().fold(T::default(), |acc, &(i, c)| acc + f[i] * (c * scale))
    };
    let mut out = vec![T::default(); n];
    match order {
        1 => {
            let s = 1.0 / (12.0 * h);
            const EDGE0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
            const EDGE1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];
            for i in 2..n - 2 {
                out[i] = lin(&[(i - 2, 1.0), (i - 1, -8.0), (i + 1, 8.0), (i + 2, -1.0)], s);
            }
            let fwd = |base: usize, w: &[f64; 5]| -> Vec<(usize, f64)> { (0..5).map(|k| (base + k, w[k])).collect() };
            let bwd = |top: usize, w: &[f64; 5]| -> Vec<(usize, f64)> { (0..5).map(|k| (top - k, -w[k])).collect() };
            out[0] = lin(&fwd(0, &EDGE0), s);
            out[1] = lin(&fwd(0, &EDGE1), s);
            out[n - 1] = lin(&bwd(n - 1, &EDGE0), s);
            out[n - 2] = lin(&bwd(n - 1, &EDGE1), s);
        }
        2 => {
            let s = 1.0 / (12.0 * h * h);
            const EDGE0: [f64; 6] = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
            const EDGE1: [f64; 6] = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];
            for i in 2..n - 2 {
                out[i] = lin(&[(i - 2, -1.0), (i - 1, 16.0), (i, -30.0), (i + 1, 16.0), (i + 2, -1.0)], s);
            }
            let fwd = |w: &[f64; 6]| -> Vec<(usize, f64)> { (0..6).map(|k| (k, w[k])).collect() };
            let bwd = |w: &[f64; 6]| -> Vec<(usize, f64)> { (0..6).map(|k| (n - 1 - k, w[k])).collect() };
            out[0] = lin(&fwd(&EDGE0), s);
            out[1] = lin(&fwd(&EDGE1), s);
            out[n - 1] = lin(&bwd(&EDGE0), s);
            out[n - 2] = lin(&bwd(&EDGE1), s);
        }
        _ => unreachable!("derivative order must be 1 or 2"),
    }
    out
}

/// Column names of the CSV layout.
pub const CSV_HEADER: [&str; 3] = ["x", "re", "im"];

fn fmt_f64(v: f64) -> String {
    // 17 significant digits: enough to round-trip every double
    format!("{v:.16e}")
}

/// Write `x,re,im` rows, followed by any extra real columns.
pub fn write_csv_to<W: Write>(writer: W, gf: &GridFunction, extra: &[(&str, &[f64])]) -> Result<()> {
    for (name, col) in extra {
        if col.len() != gf.len() {
            return Err(Error::InvalidGrid(format!("column {name} has {} rows, expected {}", col.len(), gf.len())));
        }
    }
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    header.extend(extra.iter().map(|(name, _)| *name));
    w.write_record(&header).map_err(csv_io)?;
    for (j, v) in gf.values().iter().enumerate() {
        let mut row = vec![fmt_f64(gf.grid().x(j)), fmt_f64(v.re), fmt_f64(v.im)];
        row.extend(extra.iter().map(|(_, col)| fmt_f64(col[j])));
        w.write_record(&row).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(path: impl AsRef<Path>, gf: &GridFunction) -> Result<()> {
    write_csv_to(std::fs::File::create(path)?, gf, &[])
}

fn csv_io(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse { line, message: format!("{other:?}") },
    }
}

/// Read the `x,re,im` columns (extra columns are ignored) and rebuild the grid
/// with the given boundary condition.
pub fn read_csv_from<R: Read>(reader: R, bc: Boundary) -> Result<GridFunction> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(reader);
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(csv_io)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let cell = |i: usize| -> Result<f64> {
            let raw = record
                .get(i)
                .ok_or_else(|| Error::Parse { line, message: format!("missing column {}", CSV_HEADER[i]) })?;
            raw.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse { line, message: format!("column {}: {e} ({raw:?})", CSV_HEADER[i]) })
        };
        xs.push(cell(0)?);
        values.push(Complex64::new(cell(1)?, cell(2)?));
    }
    if values.is_empty() {
        return Err(Error::NoSamples);
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::InvalidGrid("need at least two rows to infer the spacing".into()));
    }
    let dx = (xs[n - 1] - xs[0]) / (n - 1) as f64;
    let x0 = match bc {
        Boundary::DirichletOdd => xs[0] - 0.5 * dx,
        _ => xs[0],
    };
    let grid = Grid::new(x0, dx, n, bc)?;
    for (j, &x) in xs.iter().enumerate() {
        if (x - grid.x(j)).abs() > 1e-9 * dx.max(x.abs()) {
            return Err(Error::InvalidGrid(format!("non-uniform spacing at row {}", j + 1)));
        }
    }
    GridFunction::new(grid, values)
}

pub fn read_csv(path: impl AsRef<Path>, bc: Boundary) -> Result<GridFunction> {
    read_csv_from(std::fs::File::open(path)?, bc)
}
