//! Scalar building blocks: the logarithmic potential, the nonlinearity and
//! the auxiliary functions whose roots organise the traveling waves.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bracket scan resolution used by [`find_critical_points`].
pub const SCAN_POINTS: usize = 10_000;
/// Absolute tolerance of the bisection root finder.
pub const ROOT_TOL: f64 = 1e-12;

const SCAN_MARGIN: f64 = 1e-6;
const SERIES_RADIUS: f64 = 0.1;

/// Nonlinearity strength `lambda` and frame velocity `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub lambda: f64,
    pub c: f64,
}

impl Params {
    pub fn new(lambda: f64, c: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("lambda must be positive, got {lambda}")));
        }
        if !c.is_finite() {
            return Err(Error::Domain(format!("c must be finite, got {c}")));
        }
        Ok(Self { lambda, c })
    }

    /// `2 lambda`, the squared speed of sound of the background state.
    pub fn threshold(&self) -> f64 {
        2.0 * self.lambda
    }

    /// True when `0 < c^2 < 2 lambda`, i.e. a non-vanishing traveling wave exists.
    pub fn is_subsonic(&self) -> bool {
        self.c != 0.0 && self.c * self.c < self.threshold()
    }

    pub(crate) fn check_below_threshold(&self) -> Result<()> {
        let c2 = self.c * self.c;
        if c2 >= self.threshold() {
            return Err(Error::VelocityAboveThreshold { c2, threshold: self.threshold() });
        }
        Ok(())
    }
}

/// Interior roots of `g_c`, `f_c` and `f_c'` on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoints {
    pub y0: f64,
    pub y1: f64,
    pub y2: f64,
}

/// `F(y) = y ln y - y + 1`, with `F(0) = 1`.
pub fn potential(y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::Domain(format!("potential needs y >= 0, got {y}")));
    }
    Ok(potential_unchecked(y))
}

/// [`potential`] without the domain check. Uses the Taylor series around
/// `y = 1`, where the closed form cancels catastrophically.
pub(crate) fn potential_unchecked(y: f64) -> f64 {
    let t = y - 1.0;
    if t.abs() < SERIES_RADIUS {
        // F(1 + t) = sum_{k >= 2} (-1)^k t^k / (k (k - 1))
        let mut sum = 0.0;
        let mut power = t * t;
        for k in 2..24 {
            let kf = k as f64;
            let term = power / (kf * (kf - 1.0));
            sum += if k % 2 == 0 { term } else { -term };
            power *= t;
        }
        sum
    } else if y < 1e-300 {
        1.0
    } else {
        y * y.ln() - y + 1.0
    }
}

/// `z ln(|z|^2 + eps)`, extended by continuity to `0` at the vacuum when `eps = 0`.
pub fn log_nonlinearity(z: Complex64, eps: f64) -> Complex64 {
    if eps == 0.0 {
        if z == Complex64::new(0.0, 0.0) {
            return z;
        }
        // 2 ln|z| avoids the underflow of |z|^2 for tiny samples
        z * (2.0 * z.norm().ln())
    } else {
        z * (z.norm_sqr() + eps).ln()
    }
}

fn check_positive(y: f64) -> Result<()> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("expected y > 0, got {y}")));
    }
    Ok(())
}

/// `f_c(y) = (c^2/4)(1/y^3 - y) + lambda y ln y^2`, the force in `rho'' = f_c(rho)`.
pub fn f_c(y: f64, p: &Params) -> Result<f64> {
    check_positive(y)?;
    Ok(f_c_unchecked(y, p))
}

pub(crate) fn f_c_unchecked(y: f64, p: &Params) -> f64 {
    let c2 = p.c * p.c;
    0.25 * c2 * (1.0 / (y * y * y) - y) + p.lambda * y * (y * y).ln()
}

/// Derivative of [`f_c`].
pub fn f_c_prime(y: f64, p: &Params) -> Result<f64> {
    check_positive(y)?;
    Ok(f_c_prime_unchecked(y, p))
}

fn f_c_prime_unchecked(y: f64, p: &Params) -> f64 {
    let c2 = p.c * p.c;
    0.25 * c2 * (-3.0 / y.powi(4) - 1.0) + 2.0 * p.lambda * y.ln() + 2.0 * p.lambda
}

/// `g_c(y) = -(c^2/4)(1 - y^2)^2 / y^2 + lambda F(y^2)`, so that `(rho')^2 = g_c(rho)`.
pub fn g_c(y: f64, p: &Params) -> Result<f64> {
    check_positive(y)?;
    Ok(g_c_unchecked(y, p))
}

pub(crate) fn g_c_unchecked(y: f64, p: &Params) -> f64 {
    let c2 = p.c * p.c;
    let defect = (1.0 - y) * (1.0 + y);
    -0.25 * c2 * defect * defect / (y * y) + p.lambda * potential_unchecked(y * y)
}

/// `h_c(y) = lambda F((1 - y)^2) - ((2 lambda + c^2)/2) y^2`, the potential of
/// `eta = 1 - |phi|^2`. Defined for `y <= 1`, with the continuous value at `y = 1`.
pub fn h_c(y: f64, p: &Params) -> Result<f64> {
    if !(y <= 1.0) {
        return Err(Error::Domain(format!("h_c needs y <= 1, got {y}")));
    }
    Ok(h_c_unchecked(y, p))
}

pub(crate) fn h_c_unchecked(y: f64, p: &Params) -> f64 {
    let s = 1.0 - y;
    p.lambda * potential_unchecked(s * s) - 0.5 * (2.0 * p.lambda + p.c * p.c) * y * y
}

/// Bisection on a bracket `[a, b]` with `f(a) f(b) <= 0`, to absolute tolerance `tol`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NoInteriorRoot(format!("no sign change on [{a}, {b}]")));
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Uniform scan of `(lo, hi)` returning every bracket on which `f` changes sign.
pub fn sign_change_brackets<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize) -> Vec<(f64, f64)> {
    let step = (hi - lo) / (points - 1) as f64;
    let mut brackets = Vec::new();
    let mut prev_x = lo;
    let mut prev = f(lo);
    for i in 1..points {
        let x = if i == points - 1 { hi } else { lo + step * i as f64 };
        let v = f(x);
        if prev == 0.0 || prev.signum() != v.signum() {
            brackets.push((prev_x, x));
        }
        prev_x = x;
        prev = v;
    }
    brackets
}

fn unique_root<F: Fn(f64) -> f64>(f: F, name: &str) -> Result<f64> {
    let brackets = sign_change_brackets(&f, SCAN_MARGIN, 1.0 - SCAN_MARGIN, SCAN_POINTS);
    match brackets.as_slice() {
        [(a, b)] => bisect(&f, *a, *b, ROOT_TOL),
        [] => Err(Error::NoInteriorRoot(format!("{name} has no sign change on (0, 1)"))),
        many => Err(Error::Domain(format!(
            "{name} changes sign {} times on (0, 1), expected once",
            many.len()
        ))),
    }
}

/// Locate `y0` (zero of `g_c`), `y1` (zero of `f_c`) and `y2` (zero of `f_c'`) in `(0, 1)`.
pub fn find_critical_points(p: &Params) -> Result<CriticalPoints> {
    if p.c == 0.0 {
        return Err(Error::NoInteriorRoot(
            "g_0 is positive away from 1, the modulus has no interior minimum".into(),
        ));
    }
    p.check_below_threshold()?;

    let y0 = unique_root(|y| g_c_unchecked(y, p), "g_c")?;
    let y1 = unique_root(|y| f_c_unchecked(y, p), "f_c")?;
    let y2 = unique_root(|y| f_c_prime_unchecked(y, p), "f_c'")?;

    // sign pattern: f_c > 0 on (0, y1), < 0 on (y1, 1); g_c < 0 on (0, y0), > 0 on (y0, 1)
    let step = (1.0 - 2.0 * SCAN_MARGIN) / (SCAN_POINTS - 1) as f64;
    for i in 0..SCAN_POINTS {
        let y = SCAN_MARGIN + step * i as f64;
        let f = f_c_unchecked(y, p);
        let g = g_c_unchecked(y, p);
        let f_ok = (y < y1 - ROOT_TOL && f > 0.0) || (y > y1 + ROOT_TOL && f < 0.0) || (y - y1).abs() <= ROOT_TOL;
        let g_ok = (y < y0 - ROOT_TOL && g < 0.0) || (y > y0 + ROOT_TOL && g > 0.0) || (y - y0).abs() <= ROOT_TOL;
        if !f_ok || !g_ok {
            return Err(Error::Domain(format!("unexpected sign of f_c or g_c at y = {y}")));
        }
    }
    if !(0.0 < y0 && y0 < y1 && y1 < y2 && y2 < 1.0) {
        return Err(Error::Domain(format!("roots out of order: {y0}, {y1}, {y2}")));
    }
    Ok(CriticalPoints { y0, y1, y2 })
}

/// Approximate zeros of `h_c` on the open interval `(0, 1)`, from a sign scan.
pub fn h_c_interior_zeros(p: &Params, points: usize) -> Vec<f64> {
    sign_change_brackets(|y| h_c_unchecked(y, p), SCAN_MARGIN, 1.0 - SCAN_MARGIN, points)
        .into_iter()
        .map(|(a, b)| bisect(|y| h_c_unchecked(y, p), a, b, ROOT_TOL).unwrap_or(0.5 * (a + b)))
        .collect()
}

/// Both sides of `|Im((z2 ln|z2|^2 - z1 ln|z1|^2)(conj z2 - conj z1))| <= 2 |z2 - z1|^2`.
pub fn log_monotonicity_sides(z1: Complex64, z2: Complex64) -> (f64, f64) {
    let d = z2 - z1;
    let lhs = ((log_nonlinearity(z2, 0.0) - log_nonlinearity(z1, 0.0)) * d.conj()).im.abs();
    (lhs, 2.0 * d.norm_sqr())
}

/// Both sides of the Holder-type continuity estimate of `z ln|z|^2`:
/// `|x ln|x|^2 - y ln|y|^2| <= 2^{1+e} (|x|^e |ln|x|| + |y|^e |ln|y||) |x - y|^{1-e} + 2 |x - y|`.
pub fn log_continuity_sides(x: Complex64, y: Complex64, exponent: f64) -> (f64, f64) {
    let lhs = (log_nonlinearity(x, 0.0) - log_nonlinearity(y, 0.0)).norm();
    let weight = |z: Complex64| {
        let r = z.norm();
        if r == 0.0 {
            0.0
        } else {
            r.powf(exponent) * r.ln().abs()
        }
    };
    let d = (x - y).norm();
    let c = 2f64.powf(1.0 + exponent);
    (lhs, c * (weight(x) + weight(y)) * d.powf(1.0 - exponent) + 2.0 * d)
}

/// Fitted constants `C_p` for the pointwise upper bound
/// `(y - 1)^2 ln(2 + y) <= ln 3 (y - 1)^2 + C_p |y - 1|^p`, from a scan of
/// `y - 1` over `[1e-8, 1e6]`, rounded up. `p = 3` is exact (concavity of `ln`).
pub const MODULUS_POTENTIAL_CONSTANTS: [(f64, f64); 2] = [(2.5, 0.465), (3.0, 1.0 / 3.0)];

/// `(ln 2 (y-1)^2, (y-1)^2 ln(2+y), ln 3 (y-1)^2 + c_p |y-1|^p)` for `y = |v| >= 0`.
pub fn modulus_potential_sides(y: f64, p: f64, c_p: f64) -> (f64, f64, f64) {
    let t = y - 1.0;
    let t2 = t * t;
    (std::f64::consts::LN_2 * t2, t2 * (2.0 + y).ln(), 3f64.ln() * t2 + c_p * t.abs().powf(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn params(lambda: f64, c: f64) -> Params {
        Params::new(lambda, c).unwrap()
    }

    #[test]
    fn potential_values() {
        assert_eq!(potential(1.0).unwrap(), 0.0);
        assert_eq!(potential(0.0).unwrap(), 1.0);
        assert!((potential(E).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(potential(-1e-3), Err(Error::Domain(_))));
    }

    #[test]
    fn potential_series_matches_closed_form() {
        for &y in &[0.905, 0.95, 0.99, 1.01, 1.05, 1.099] {
            let closed = y * f64::ln(y) - y + 1.0;
            assert!((potential(y).unwrap() - closed).abs() < 1e-15, "y = {y}");
        }
        // closed form loses all digits here; the series keeps F ~ t^2/2
        let y = 1.0 + 1e-9;
        let t = y - 1.0;
        assert!((potential(y).unwrap() / (t * t / 2.0) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn nonlinearity_values() {
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(log_nonlinearity(Complex64::new(1.0, 0.0), 0.0), zero);
        assert_eq!(log_nonlinearity(zero, 0.0), zero);
        let z = Complex64::new(0.0, E);
        let out = log_nonlinearity(z, 0.0);
        assert!((out - Complex64::new(0.0, 2.0 * E)).norm() < 1e-14);
        let tiny = Complex64::new(1e-200, 0.0);
        assert!(log_nonlinearity(tiny, 0.0).norm() < 1e-196);
        let reg = log_nonlinearity(Complex64::new(0.5, 0.0), 0.25);
        assert!((reg.re - 0.5 * f64::ln(0.5)).abs() < 1e-15);
    }

    #[test]
    fn f_c_values() {
        for &(l, c) in &[(1.0, 0.0), (1.0, 1.0), (3.0, 0.3)] {
            assert_eq!(f_c(1.0, &params(l, c)).unwrap(), 0.0);
        }
        let direct = 0.25 * (8.0 - 0.5) + 0.5 * f64::ln(0.25);
        assert!((f_c(0.5, &params(1.0, 1.0)).unwrap() - direct).abs() < 1e-15);
        assert!(f_c(0.0, &params(1.0, 1.0)).is_err());
    }

    #[test]
    fn g_c_values() {
        let p = params(1.0, 1.0);
        assert_eq!(g_c(1.0, &p).unwrap(), 0.0);
        let p0 = params(1.0, 0.0);
        for &y in &[0.1, 0.5, 0.9, 1.5] {
            assert!((g_c(y, &p0).unwrap() - potential(y * y).unwrap()).abs() < 1e-15);
        }
        assert!(g_c(-0.1, &p).is_err());
    }

    #[test]
    fn h_c_values() {
        let p = params(1.0, 1.0);
        assert!(h_c(0.0, &p).unwrap().abs() < 1e-16);
        assert!((h_c(1.0, &p).unwrap() + 0.5).abs() < 1e-15);
        let p = params(2.0, 0.7);
        assert!((h_c(1.0, &p).unwrap() + 0.49 / 2.0).abs() < 1e-15);
        assert!(h_c(1.5, &p).is_err());
    }

    #[test]
    fn critical_points_lambda1_c1() {
        let cp = find_critical_points(&params(1.0, 1.0)).unwrap();
        assert!(cp.y0 > 0.61 && cp.y0 < 0.62, "y0 = {}", cp.y0);
        let p = params(1.0, 1.0);
        assert!(g_c(cp.y0, &p).unwrap().abs() < 1e-10);
        assert!(f_c(cp.y1, &p).unwrap().abs() < 1e-10);
        assert!(f_c_prime(cp.y2, &p).unwrap().abs() < 1e-10);
    }

    #[test]
    fn critical_points_near_threshold() {
        let cp = find_critical_points(&params(1.0, 1.4)).unwrap();
        assert!(0.0 < cp.y0 && cp.y0 < cp.y1 && cp.y1 < cp.y2 && cp.y2 < 1.0);
    }

    #[test]
    fn critical_points_errors() {
        assert!(matches!(
            find_critical_points(&params(1.0, 2f64.sqrt())),
            Err(Error::VelocityAboveThreshold { .. })
        ));
        assert!(matches!(find_critical_points(&params(1.0, 0.0)), Err(Error::NoInteriorRoot(_))));
        assert!(Params::new(0.0, 1.0).is_err());
        assert!(Params::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn h_c_zero_structure() {
        let p = params(1.0, 1.0);
        let cp = find_critical_points(&p).unwrap();
        let zeros = h_c_interior_zeros(&p, SCAN_POINTS);
        assert_eq!(zeros.len(), 1);
        assert!((zeros[0] - (1.0 - cp.y0 * cp.y0)).abs() < 1e-9);
        for &c in &[2f64.sqrt(), 1.5, 2.0] {
            assert!(h_c_interior_zeros(&params(1.0, c), SCAN_POINTS).is_empty());
        }
    }

    proptest! {
        #[test]
        fn potential_between_zero_and_taylor_bound(y in 0.0f64..50.0) {
            let f = potential(y).unwrap();
            prop_assert!(f >= 0.0);
            prop_assert!(f <= (y - 1.0) * (y - 1.0) + 1e-14 * (1.0 + y * y));
        }

        #[test]
        fn g_c_derivative_is_twice_f_c(y in 0.2f64..2.0, lambda in 0.2f64..3.0, frac in 0.0f64..0.99) {
            let c = frac * (2.0 * lambda).sqrt();
            let p = params(lambda, c);
            let h = 1e-4;
            let fd = (g_c(y + h, &p).unwrap() - g_c(y - h, &p).unwrap()) / (2.0 * h);
            let exact = 2.0 * f_c(y, &p).unwrap();
            // central difference error ~ h^2 g'''/6
            prop_assert!((fd - exact).abs() < 1e-6 * (1.0 + exact.abs() + 1.0 / y.powi(5)));
        }

        #[test]
        fn change_of_variables_identity(rho in 0.05f64..2.0, lambda in 0.2f64..3.0, c in -3.0f64..3.0) {
            let p = params(lambda, c);
            let lhs = 4.0 * rho * rho * g_c(rho, &p).unwrap();
            let rhs = 2.0 * h_c(1.0 - rho * rho, &p).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn ln2_upper_bound_fails_near_unit_modulus() {
        // ln(2 + y) -> ln 3 as y -> 1, so no C_p rescues a leading ln 2
        let y = 1.0 + 1e-8;
        let (lower, middle, _) = modulus_potential_sides(y, 3.0, 1.0 / 3.0);
        let t = y - 1.0;
        assert!(middle > lower + 1e6 * t.powi(3));
    }

    proptest! {
        #[test]
        fn monotonicity_inequality(a in -50.0f64..50.0, b in -50.0f64..50.0, c in -1.0f64..1.0, d in -1.0f64..1.0) {
            let z1 = Complex64::new(a, b);
            let z2 = z1 + Complex64::new(c, d);
            let (lhs, rhs) = log_monotonicity_sides(z1, z2);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-300);
        }

        #[test]
        fn continuity_inequality(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0, d in -5.0f64..5.0, e in 0.05f64..0.95) {
            let (lhs, rhs) = log_continuity_sides(Complex64::new(a, b), Complex64::new(c, d), e);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }

        #[test]
        fn modulus_potential_bounds(y in 0.0f64..1e4) {
            for (p, c_p) in MODULUS_POTENTIAL_CONSTANTS {
                let (lower, middle, upper) = modulus_potential_sides(y, p, c_p);
                prop_assert!(lower <= middle);
                prop_assert!(middle <= upper * (1.0 + 1e-14));
            }
        }
    }
}
