//! Small dense complex helpers for the 4×4 region and transfer matrices.

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat4 = Matrix4<Complex64>;

/// Condition numbers above this are logged.
pub const COND_WARN: f64 = 1e8;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `exp(i z)` for complex `z`.
pub fn expi(z: Complex64) -> Complex64 {
    (Complex64::i() * z).exp()
}

pub fn norm1(m: &CMat4) -> f64 {
    (0..4)
        .map(|j| (0..4).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// 1-norm condition number, `None` when the LU factorisation is singular.
pub fn condition_number(m: &CMat4) -> Option<f64> {
    let inv = m.lu().try_inverse()?;
    Some(norm1(m) * norm1(&inv))
}

/// Solves `a x = b` by LU with partial pivoting.
pub fn solve(a: &CMat4, b: &CMat4, context: &'static str) -> Result<CMat4> {
    let lu = a.lu();
    let x = lu.solve(b).ok_or(Error::Singular { context })?;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Singular { context });
    }
    if log::log_enabled!(log::Level::Warn) {
        if let Some(inv) = lu.try_inverse() {
            let cond = norm1(a) * norm1(&inv);
            if cond > COND_WARN {
                log::warn!("{context}: condition number {cond:.3e}");
            }
        }
    }
    Ok(x)
}
