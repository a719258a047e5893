//! One-dimensional searches on resonance curves.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[lo, hi]`, stopping once
/// the bracket is narrower than `rel_tol * (hi - lo)`.
///
/// Returns `(x_max, f_max)`.
pub fn golden_max<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo, hi);
    let tol = rel_tol * (hi - lo);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2)?;
        }
        if !(x1 < x2) {
            break;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Golden-section search for a minimum.
pub fn golden_min<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (x, fx) = golden_max(|x| f(x).map(|v| -v), lo, hi, rel_tol)?;
    Ok((x, -fx))
}

/// Bisection for `f(x) = level` on `[a, b]`, where `f - level` changes sign.
/// Stops when the interval is below `rel_tol * max(|a|, |b|)` or cannot be
/// split further in floating point.
pub fn bisect_level<F>(mut f: F, a: f64, b: f64, level: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = (a, b);
    let mut f_lo = f(lo)? - level;
    let f_hi = f(hi)? - level;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::BracketFailure { lo: a, hi: b });
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if !(mid > lo.min(hi) && mid < lo.max(hi)) {
            break;
        }
        if (hi - lo).abs() <= rel_tol * lo.abs().max(hi.abs()) {
            break;
        }
        let f_mid = f(mid)? - level;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Walks right from `start` in steps of `step` while `f` decreases and
/// returns the refined location of the first local minimum.
pub fn first_local_min<F>(mut f: F, start: f64, step: f64, max_steps: usize) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut prev = f(start)?;
    let mut x = start + step;
    let mut cur = f(x)?;
    if cur > prev {
        return Err(Error::BracketFailure { lo: start, hi: x });
    }
    for _ in 0..max_steps {
        let next_x = x + step;
        let next = f(next_x)?;
        if next > cur {
            let (xm, _) = golden_min(&mut f, x - step, next_x, 1e-12)?;
            return Ok(xm);
        }
        prev = cur;
        cur = next;
        x = next_x;
    }
    let _ = prev;
    Err(Error::BracketFailure { lo: start, hi: x })
}

/// Refines a maximum near `x0` as the zero of the symmetric difference
/// `f(x + h) - f(x - h)`, evaluated at `h` and `h/2` and Richardson
/// extrapolated. The zero is searched within `x0 ± window`, widening the
/// window up to `max_window` when it does not contain a sign change.
///
/// Rounding in `f` enters the location as `ε / (f'' h)` instead of the
/// `sqrt(ε / f'')` floor of a direct search on `f`.
pub fn refine_stationary<F>(mut f: F, x0: f64, h: f64, window: f64, max_window: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut zero_at = |h: f64| -> Result<f64> {
        let mut g = |x: f64| Ok(f(x + h)? - f(x - h)?);
        let mut w = window;
        loop {
            let (a, b) = (x0 - w, x0 + w);
            let (ga, gb) = (g(a)?, g(b)?);
            if ga > 0.0 && gb < 0.0 {
                return bisect_level(&mut g, a, b, 0.0, 0.0);
            }
            if w >= max_window {
                return Err(Error::BracketFailure { lo: a, hi: b });
            }
            w = (4.0 * w).min(max_window);
        }
    };
    let coarse = zero_at(h)?;
    let fine = zero_at(0.5 * h)?;
    Ok(fine + (fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, fx) = golden_max(|x| Ok(1.0 - (x - 0.3).powi(2)), -1.0, 2.0, 1e-10).unwrap();
        assert!((x - 0.3).abs() < 1e-7);
        assert_relative_eq!(fx, 1.0, epsilon = 1e-14);
        let (x, _) = golden_min(|x| Ok((x + 0.25).powi(2)), -1.0, 1.0, 1e-10).unwrap();
        assert!((x + 0.25).abs() < 1e-7);
    }

    #[test]
    fn bisection_hits_level() {
        let x = bisect_level(|x| Ok(x * x), 0.0, 3.0, 2.0, 1e-15).unwrap();
        assert_relative_eq!(x, 2f64.sqrt(), max_relative = 1e-14);
        let x = bisect_level(|x| Ok(-x), -2.0, 0.5, 1.0, 1e-15).unwrap();
        assert_relative_eq!(x, -1.0, max_relative = 1e-14);
        assert!(bisect_level(Ok, 1.0, 2.0, 5.0, 1e-12).is_err());
    }

    #[test]
    fn stationary_point_of_skewed_peak() {
        // f'(x) = 0 at x = 0.01 for f = -(x - 0.01)^2 + 0.3 (x - 0.01)^3 near the max
        let f = |x: f64| Ok(-(x - 0.01f64).powi(2) + 0.3 * (x - 0.01f64).powi(3) + 1.0);
        let x = refine_stationary(f, 0.0, 0.1, 1e-3, 0.5).unwrap();
        assert!((x - 0.01).abs() < 1e-6, "{x}");
        let x =
            refine_stationary(|x: f64| Ok(-(x - 0.2f64).powi(2)), 0.19, 0.05, 1e-4, 0.5).unwrap();
        assert!((x - 0.2).abs() < 1e-12, "{x}");
    }

    #[test]
    fn first_minimum_of_cosine() {
        let x = first_local_min(|x| Ok(x.cos()), 0.0, 0.01, 10_000).unwrap();
        assert!((x - std::f64::consts::PI).abs() < 1e-6);
        assert!(first_local_min(Ok, 0.0, 0.1, 10).is_err());
    }
}
