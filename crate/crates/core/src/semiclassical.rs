//! Classical-motion baselines: the atom crosses each zone in the classical
//! flight time and sees a time-dependent two-level problem.

use num_complex::Complex64;
use serde::Serialize;

use crate::physics::{Geometry, ScenarioConfig};

type U2 = [[Complex64; 2]; 2];

/// Rabi excitation probability after a square pulse of duration `t`.
pub fn rabi_scl(delta: f64, omega: f64, t: f64) -> f64 {
    let omega_prime2 = omega * omega + delta * delta;
    if omega_prime2 == 0.0 {
        return 0.0;
    }
    let s = (omega_prime2.sqrt() * t / 2.0).sin();
    omega * omega / omega_prime2 * s * s
}

/// Rotating-frame evolution over a field of duration `tau`, with
/// `H/ħ = [[0, Ω/2], [Ω/2, -Δ]]`. The global phase `e^{iΔτ/2}` is dropped.
fn field_evolution(delta: f64, omega: f64, tau: f64) -> U2 {
    let omega_prime = delta.hypot(omega);
    let i = Complex64::i();
    let (s, cth) = (omega_prime * tau / 2.0).sin_cos();
    let (nz, nx) = if omega_prime == 0.0 {
        (0.0, 0.0)
    } else {
        (delta / omega_prime, omega / omega_prime)
    };
    [
        [cth - i * s * nz, -i * s * nx],
        [-i * s * nx, cth + i * s * nz],
    ]
}

fn mul(a: &U2, b: &U2) -> U2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// Two-zone Ramsey probability `|⟨2|U_field U_gap U_field|1⟩|²`.
pub fn ramsey_scl(delta: f64, omega: f64, tau_field: f64, tau_gap: f64) -> f64 {
    let field = field_evolution(delta, omega, tau_field);
    // diag(1, e^{iΔτ}) written symmetrically; the global phase drops out.
    let half = Complex64::from_polar(1.0, 0.5 * delta * tau_gap);
    let gap = [
        [half.conj(), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), half],
    ];
    let total = mul(&field, &mul(&gap, &field));
    total[1][0].norm_sqr()
}

/// Semiclassical probability for a scenario, with flight times from the
/// classical kinematics `T = l/v`, `τ_gap = L/v`.
pub fn semiclassical_probability(config: &ScenarioConfig, delta: f64) -> f64 {
    let omega = config.rabi_frequency();
    let t = config.flight_time();
    match config.geometry {
        Geometry::Rabi => rabi_scl(delta, omega, t),
        Geometry::Ramsey => ramsey_scl(delta, omega, t, config.gap_time()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemiclassicalCurve {
    pub deltas: Vec<f64>,
    pub p12: Vec<f64>,
    pub flight_time: f64,
    pub geometry: Geometry,
}

pub fn semiclassical_curve(config: &ScenarioConfig, deltas: &[f64]) -> SemiclassicalCurve {
    SemiclassicalCurve {
        deltas: deltas.to_vec(),
        p12: deltas
            .iter()
            .map(|&d| semiclassical_probability(config, d))
            .collect(),
        flight_time: config.flight_time(),
        geometry: config.geometry,
    }
}
