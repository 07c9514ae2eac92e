//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` with adaptive Simpson refinement.
///
/// `abs_tol` is the absolute tolerance of the whole interval; each split
/// halves it for its children.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, abs_tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Evaluation(format!(
            "adaptive Simpson exhausted its depth on [{a}, {b}]"
        )));
    }
    let l = recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

/// Integrates over `[a, b]` after splitting at every breakpoint inside it.
///
/// Piecewise-smooth integrands (linear interpolants) converge on the first
/// panel of each piece when the kinks are aligned with panel ends.
pub fn integrate_piecewise<F>(f: &F, a: f64, b: f64, breakpoints: &[f64], abs_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if b <= a {
        return Ok(0.0);
    }
    let start = breakpoints.partition_point(|&x| x <= a);
    let end = breakpoints.partition_point(|&x| x < b);
    let mut total = 0.0;
    let mut lo = a;
    for &x in &breakpoints[start..end] {
        if x > lo {
            total += adaptive_simpson(f, lo, x, abs_tol)?;
            lo = x;
        }
    }
    total += adaptive_simpson(f, lo, b, abs_tol)?;
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_smooth_functions() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
        let g = adaptive_simpson(&|x: f64| (-x * x).exp(), 0.0, 6.0, 1e-12).unwrap();
        assert!((g - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn piecewise_linear_is_exact_with_breakpoints() {
        let knots = [1.0, 2.5];
        let f = |x: f64| {
            if x < 1.0 {
                0.0
            } else if x < 2.5 {
                (x - 1.0) / 1.5
            } else {
                1.0
            }
        };
        let v = integrate_piecewise(&f, 0.0, 4.0, &knots, 1e-14).unwrap();
        assert!((v - (0.75 + 1.5)).abs() < 1e-14);
    }

    #[test]
    fn empty_interval_is_zero() {
        assert_eq!(integrate_piecewise(&|_| 1.0, 2.0, 2.0, &[], 1e-10).unwrap(), 0.0);
    }
}
