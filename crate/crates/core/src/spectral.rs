//! FFT helpers on a periodic sample array.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Cached forward/inverse transforms and angular wavenumbers for `n` samples
/// over a period of length `period`.
#[derive(Clone)]
pub struct Spectral {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("n", &self.n).finish()
    }
}

impl Spectral {
    pub fn new(n: usize, period: f64) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let base = 2.0 * PI / period;
        let k = (0..n)
            .map(|j| {
                let m = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
                // the Nyquist mode is taken as negative, matching fftfreq
                if n % 2 == 0 && j == n / 2 {
                    -(m * base)
                } else {
                    m * base
                }
            })
            .collect();
        Self { n, forward, inverse, k }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    /// Inverse transform including the `1/n` normalisation.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        let scale = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    /// Spectral derivative of order 1 or 2. The Nyquist mode is dropped for odd orders.
    pub fn derivative(&self, values: &[Complex64], order: u32) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.forward(&mut buf);
        let nyquist = if self.n % 2 == 0 { Some(self.n / 2) } else { None };
        for (j, v) in buf.iter_mut().enumerate() {
            let k = self.k[j];
            *v *= match order {
                1 if Some(j) == nyquist => Complex64::new(0.0, 0.0),
                1 => Complex64::new(0.0, k),
                2 => Complex64::new(-k * k, 0.0),
                _ => unreachable!("derivative order must be 1 or 2"),
            };
        }
        self.inverse(&mut buf);
        buf
    }

    /// Multiply each Fourier mode by `multiplier[j]`, in place.
    pub fn apply_multiplier(&self, values: &mut [Complex64], multiplier: &[Complex64]) {
        self.forward(values);
        for (v, m) in values.iter_mut().zip(multiplier) {
            *v *= *m;
        }
        self.inverse(values);
    }

    /// Translate a periodic signal by `shift` (i.e. return `u(x - shift)`).
    pub fn translate(&self, values: &[Complex64], shift: f64) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.forward(&mut buf);
        let nyquist = if self.n % 2 == 0 { Some(self.n / 2) } else { None };
        for (j, v) in buf.iter_mut().enumerate() {
            if Some(j) == nyquist {
                // the real part of the Nyquist mode shifts as cos(k s)
                *v *= (self.k[j] * shift).cos();
            } else {
                *v *= Complex64::from_polar(1.0, -self.k[j] * shift);
            }
        }
        self.inverse(&mut buf);
        buf
    }
}
