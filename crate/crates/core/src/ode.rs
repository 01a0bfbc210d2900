//! Classic fourth-order Runge-Kutta on small fixed-size systems.

/// One RK4 step of `y' = f(x, y)`.
pub fn rk4_step<const N: usize, F>(f: &F, x: f64, y: [f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let axpy = |a: &[f64; N], s: f64, b: &[f64; N]| -> [f64; N] {
        let mut out = *a;
        for i in 0..N {
            out[i] += s * b[i];
        }
        out
    };
    let k1 = f(x, &y);
    let k2 = f(x + 0.5 * h, &axpy(&y, 0.5 * h, &k1));
    let k3 = f(x + 0.5 * h, &axpy(&y, 0.5 * h, &k2));
    let k4 = f(x + h, &axpy(&y, h, &k3));
    let mut out = y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrate from `x_from` to `x_to` with at least `substeps` equal steps and
/// step length at most `max_step`.
pub fn rk4_span<const N: usize, F>(f: &F, x_from: f64, x_to: f64, y: [f64; N], max_step: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let span = x_to - x_from;
    if span == 0.0 {
        return y;
    }
    let steps = (span.abs() / max_step).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    let mut state = y;
    for i in 0..steps {
        state = rk4_step(f, x_from + i as f64 * h, state, h);
    }
    state
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_is_fourth_order() {
        let f = |_x: f64, y: &[f64; 2]| [y[1], -y[0]];
        let err = |h: f64| {
            let y = rk4_span(&f, 0.0, 1.0, [1.0, 0.0], h);
            (y[0] - 1f64.cos()).abs()
        };
        let ratio = err(0.02) / err(0.01);
        assert!((ratio.log2() - 4.0).abs() < 0.2, "ratio {ratio}");
    }
}
