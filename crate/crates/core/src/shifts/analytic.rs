use crate::physics::{Geometry, PhysicalConstants, Pulse, ScenarioConfig};

/// Amplitude `ħ²π⁴/(16 m² v l³)` of the Rabi maximum shift.
pub fn rabi_envelope(k: f64, l: f64, c: &PhysicalConstants) -> f64 {
    let v = c.velocity(k);
    let h = c.hbar_over_m();
    h * h * std::f64::consts::PI.powi(4) / (16.0 * v * l.powi(3))
}

/// Maximum shift for a π-pulse Rabi zone, `ħ²π⁴/(16 m² v l³) sin(2kl)`.
pub fn analytic_max_shift_rabi(k: f64, l: f64, c: &PhysicalConstants) -> f64 {
    rabi_envelope(k, l, c) * (2.0 * k * l).sin()
}

/// Positive envelope `ħ²π²/(16 m² v l³ N)` of the Ramsey maximum shift.
pub fn analytic_max_shift_ramsey_envelope(k: f64, l: f64, n: f64, c: &PhysicalConstants) -> f64 {
    let v = c.velocity(k);
    let h = c.hbar_over_m();
    h * h * std::f64::consts::PI.powi(2) / (16.0 * v * l.powi(3) * n)
}

/// Rough half-height shift `ħπ²/(4 m l²)`.
pub fn half_height_estimate(l: f64, c: &PhysicalConstants) -> f64 {
    c.hbar_over_m() * std::f64::consts::PI.powi(2) / (4.0 * l * l)
}

/// Envelope of the maximum shift for the scenario, when its pulse matches
/// the condition the analytic formulas assume.
pub fn envelope(config: &ScenarioConfig) -> Option<f64> {
    let k = config.wavenumber();
    match (config.geometry, config.pulse) {
        (Geometry::Rabi, Pulse::PiPulse) => {
            Some(rabi_envelope(k, config.field_width, &config.constants))
        }
        (Geometry::Ramsey, Pulse::HalfPiPulse) => Some(analytic_max_shift_ramsey_envelope(
            k,
            config.field_width,
            config.gap_ratio(),
            &config.constants,
        )),
        _ => None,
    }
}
