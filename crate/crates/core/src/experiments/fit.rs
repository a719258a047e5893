use serde::Serialize;

use crate::error::{Error, Result};

/// Power law `y = c·x^p` fitted in log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub c: f64,
    pub p: f64,
    /// RMS of `ln y - ln(c x^p)`.
    pub rms_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InverseSquareFit {
    pub free: FitResult,
    /// Same data with the exponent fixed at -2.
    pub constrained: FitResult,
}

fn logs(xs: &[f64], ys: &[f64]) -> Result<Vec<(f64, f64)>> {
    if xs.len() != ys.len() {
        return Err(Error::Fit(format!(
            "{} abscissae but {} ordinates",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 4 {
        return Err(Error::Fit(format!(
            "need at least 4 points, got {}",
            xs.len()
        )));
    }
    xs.iter()
        .zip(ys)
        .map(|(&x, &y)| {
            if x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite() {
                Ok((x.ln(), y.ln()))
            } else {
                Err(Error::Fit(format!("non-positive point ({x}, {y})")))
            }
        })
        .collect()
}

fn rms(pts: &[(f64, f64)], ln_c: f64, p: f64) -> f64 {
    (pts.iter()
        .map(|(u, v)| (v - ln_c - p * u).powi(2))
        .sum::<f64>()
        / pts.len() as f64)
        .sqrt()
}

/// Least-squares line through `(ln x, ln y)`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    let pts = logs(xs, ys)?;
    let n = pts.len() as f64;
    let (mu, mv) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (u, v)| (a + u / n, b + v / n));
    let sxx: f64 = pts.iter().map(|(u, _)| (u - mu).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all abscissae are equal".into()));
    }
    let p = pts.iter().map(|(u, v)| (u - mu) * (v - mv)).sum::<f64>() / sxx;
    let ln_c = mv - p * mu;
    Ok(FitResult {
        c: ln_c.exp(),
        p,
        rms_residual: rms(&pts, ln_c, p),
    })
}

pub fn fit_inverse_square(xs: &[f64], ys: &[f64]) -> Result<InverseSquareFit> {
    let free = fit_power_law(xs, ys)?;
    let pts = logs(xs, ys)?;
    let ln_c = pts.iter().map(|(u, v)| v + 2.0 * u).sum::<f64>() / pts.len() as f64;
    let constrained = FitResult {
        c: ln_c.exp(),
        p: -2.0,
        rms_residual: rms(&pts, ln_c, -2.0),
    };
    Ok(InverseSquareFit { free, constrained })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_inverse_square() {
        let xs = [1.0, 2.0, 3.5, 7.0, 11.0];
        let ys: Vec<f64> = xs.iter().map(|x| 7.0 / (x * x)).collect();
        let fit = fit_inverse_square(&xs, &ys).unwrap();
        assert_relative_eq!(fit.free.p, -2.0, epsilon = 1e-13);
        assert_relative_eq!(fit.free.c, 7.0, max_relative = 1e-13);
        assert!(fit.free.rms_residual < 1e-14);
        assert_relative_eq!(fit.constrained.c, 7.0, max_relative = 1e-14);
        assert!(fit.constrained.rms_residual < 1e-14);
    }

    #[test]
    fn rejects_bad_data() {
        assert!(fit_power_law(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(fit_power_law(&[1.0, 2.0, 3.0, 4.0], &[1.0, -2.0, 3.0, 4.0]).is_err());
        assert!(fit_power_law(&[2.0; 4], &[1.0, 2.0, 3.0, 4.0]).is_err());
    }

    #[test]
    fn constrained_residual_sees_wrong_exponent() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-1.5)).collect();
        let fit = fit_inverse_square(&xs, &ys).unwrap();
        assert_relative_eq!(fit.free.p, -1.5, epsilon = 1e-13);
        assert!(fit.constrained.rms_residual > 0.1);
    }
}
