use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::physics::ScenarioConfig;
use crate::transfer::scenario_amplitudes;

/// Target relative accuracy of the Richardson-controlled derivatives.
const DERIVATIVE_TOL: f64 = 1e-8;
const MAX_HALVINGS: usize = 24;

/// Second-order expansion `t₁₂(Δ) ≈ γ₀ + γ₁Δ + γ₂Δ²` around resonance and the
/// linearised stationarity condition `θ₀ + θ₁Δ = 0` of `(q/k)|t₁₂|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionCoefficients {
    pub gamma0: Complex64,
    pub gamma1: Complex64,
    pub gamma2: Complex64,
    pub theta0: f64,
    pub theta1: f64,
    /// `q²ħ/m` at resonance (rad/s).
    pub q2_hbar_over_m: f64,
    /// Finite-difference step that met the tolerance (rad/s).
    pub step: f64,
}

impl ExpansionCoefficients {
    pub fn from_gammas(
        gamma0: Complex64,
        gamma1: Complex64,
        gamma2: Complex64,
        q2_hbar_over_m: f64,
    ) -> Self {
        let (theta0, theta1) = thetas(gamma0, gamma1, gamma2, q2_hbar_over_m);
        Self {
            gamma0,
            gamma1,
            gamma2,
            theta0,
            theta1,
            q2_hbar_over_m,
            step: 0.0,
        }
    }

    /// Root of `θ₀ + θ₁Δ`.
    pub fn predicted_peak(&self) -> f64 {
        -self.theta0 / self.theta1
    }

    /// Quadratic model `(q/k)|γ₀ + γ₁Δ + γ₂Δ²|²`.
    pub fn probability(&self, config: &ScenarioConfig, delta: f64) -> f64 {
        let k = config.wavenumber();
        let q2 = k * k + 2.0 * delta / config.constants.hbar_over_m();
        if q2 <= 0.0 {
            return 0.0;
        }
        let t = self.gamma0 + self.gamma1 * delta + self.gamma2 * delta * delta;
        q2.sqrt() / k * t.norm_sqr()
    }
}

fn thetas(g0: Complex64, g1: Complex64, g2: Complex64, s: f64) -> (f64, f64) {
    let re = |a: Complex64, b: Complex64| (a * b.conj()).re;
    let theta0 = g0.norm_sqr() + s * 2.0 * re(g1, g0);
    let theta1 = 2.0 * re(g1, g0) + 2.0 * s * (g1.norm_sqr() + 2.0 * re(g2, g0));
    (theta0, theta1)
}

struct Derivatives {
    first: Complex64,
    second: Complex64,
}

fn stencil<F: FnMut(f64) -> Result<Complex64>>(
    f: &mut F,
    f0: Complex64,
    h: f64,
) -> Result<Derivatives> {
    let (m2, m1, p1, p2) = (f(-2.0 * h)?, f(-h)?, f(h)?, f(2.0 * h)?);
    Ok(Derivatives {
        first: (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h),
        second: (-m2 + 16.0 * m1 - 30.0 * f0 + 16.0 * p1 - p2) / (12.0 * h * h),
    })
}

/// Expansion coefficients by fourth-order central differences in Δ, with
/// the step halved until successive Richardson estimates agree to 1e-8.
pub fn gamma_expansion(config: &ScenarioConfig) -> Result<ExpansionCoefficients> {
    let mut t12 = |d: f64| scenario_amplitudes(config, d).map(|a| a.t12);
    let gamma0 = t12(0.0)?;
    let mut h = 0.2 / (config.flight_time() + config.gap_time());
    let mut prev = stencil(&mut t12, gamma0, h)?;
    let mut first: Option<(Complex64, f64)> = None;
    let mut second: Option<(Complex64, f64)> = None;
    let mut best = f64::INFINITY;
    for _ in 0..MAX_HALVINGS {
        h *= 0.5;
        let cur = stencil(&mut t12, gamma0, h)?;
        let e1 = (cur.first - prev.first).norm() / 15.0 / cur.first.norm();
        let e2 = (cur.second - prev.second).norm() / 15.0 / cur.second.norm();
        if first.is_none() && e1 <= DERIVATIVE_TOL {
            first = Some((cur.first + (cur.first - prev.first) / 15.0, h));
        }
        if second.is_none() && e2 <= DERIVATIVE_TOL {
            second = Some((cur.second + (cur.second - prev.second) / 15.0, h));
        }
        best = best.min(e1.max(e2));
        if let (Some((d1, h1)), Some((d2, h2))) = (first, second) {
            let k = config.wavenumber();
            let mut out = ExpansionCoefficients::from_gammas(
                gamma0,
                d1,
                0.5 * d2,
                k * k * config.constants.hbar_over_m(),
            );
            out.step = h1.min(h2);
            return Ok(out);
        }
        prev = cur;
    }
    Err(Error::DerivativeNotConverged { best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::{PhysicalConstants, Pulse};
    use crate::transfer::excitation_probability;

    #[test]
    fn gamma0_is_resonant_amplitude() {
        let cfg = ScenarioConfig::rabi(PhysicalConstants::cesium(), 2e-5, 3e-3, Pulse::PiPulse);
        let e = gamma_expansion(&cfg).unwrap();
        assert_eq!(e.gamma0, scenario_amplitudes(&cfg, 0.0).unwrap().t12);
        let again =
            ExpansionCoefficients::from_gammas(e.gamma0, e.gamma1, e.gamma2, e.q2_hbar_over_m);
        assert_eq!((again.theta0, again.theta1), (e.theta0, e.theta1));
    }

    #[test]
    fn inversion_approaches_unity_with_kl() {
        let c = PhysicalConstants::cesium();
        let mut last = 0.0;
        for v in [5e-6, 5e-5, 5e-4] {
            let g = gamma_expansion(&ScenarioConfig::rabi(c, v, 3e-3, Pulse::PiPulse))
                .unwrap()
                .gamma0
                .norm_sqr();
            assert!(g > last);
            last = g;
        }
        assert!((1.0 - last).abs() < 1e-5, "{last}");
    }

    #[test]
    fn quadratic_model_error_is_cubic() {
        let cfg = ScenarioConfig::rabi(PhysicalConstants::cesium(), 2e-5, 3e-3, Pulse::PiPulse);
        let e = gamma_expansion(&cfg).unwrap();
        let omega = cfg.rabi_frequency();
        let err =
            |d: f64| (e.probability(&cfg, d) - excitation_probability(&cfg, d).unwrap()).abs();
        let pts: Vec<(f64, f64)> = (0..5)
            .map(|i| {
                let d = 1e-3 * omega * 10f64.powf(i as f64 / 4.0);
                (d.ln(), err(d).ln())
            })
            .collect();
        let n = pts.len() as f64;
        let (mx, my) = pts
            .iter()
            .fold((0.0, 0.0), |(a, b), p| (a + p.0 / n, b + p.1 / n));
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        assert!(slope >= 2.7, "slope {slope}");
    }
}
