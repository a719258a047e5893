use serde::{Deserialize, Serialize};

use super::analytic::envelope;
use crate::error::{Error, Result};
use crate::model::{QuantumModel, ResonanceModel};
use crate::physics::{Geometry, Pulse, ScenarioConfig};
use crate::search::{bisect_level, first_local_min, golden_max, refine_stationary};
use crate::semiclassical::semiclassical_probability;

/// Golden-section resolution, relative to the lobe width.
const GOLDEN_TOL: f64 = 1e-10;

/// Half-width of the semiclassical central lobe: the first minimum of the
/// classical-motion curve on the positive side.
pub fn central_lobe(config: &ScenarioConfig) -> Result<f64> {
    if config.geometry == Geometry::Rabi && config.pulse == Pulse::PiPulse {
        return Ok(3f64.sqrt() * config.rabi_frequency());
    }
    let step = 0.01 * std::f64::consts::PI / (config.flight_time() + config.gap_time());
    first_local_min(
        |d| Ok(semiclassical_probability(config, d)),
        0.0,
        step,
        1_000_000,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakResult {
    pub delta_max: f64,
    pub peak_height: f64,
    /// Half-width of the bracketing lobe.
    pub lobe: f64,
}

/// Location and height of the maximum of the central fringe.
pub fn peak_shift(model: &dyn ResonanceModel) -> Result<PeakResult> {
    let lobe = central_lobe(model.scenario())?;
    let p = |d: f64| model.excitation(d);
    let (x_golden, _) = golden_max(p, -lobe, lobe, GOLDEN_TOL)?;
    if lobe - x_golden.abs() < 1e-3 * lobe {
        return Err(Error::BracketFailure {
            lo: -lobe,
            hi: lobe,
        });
    }
    let delta_max = match refine_stationary(p, x_golden, 0.05 * lobe, 1e-5 * lobe, 0.5 * lobe) {
        Ok(x) => x,
        Err(e) => {
            log::debug!("stationary-point refinement failed ({e}); keeping golden-section maximum");
            x_golden
        }
    };
    Ok(PeakResult {
        delta_max,
        peak_height: model.excitation(delta_max)?,
        lobe,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftResult {
    /// Detuning of the fringe maximum (rad/s).
    pub delta_max: f64,
    /// Midpoint of the half-height detunings (rad/s).
    pub delta_hh: f64,
    pub frac_max: f64,
    pub frac_hh: f64,
    pub peak_height: f64,
    pub hh_left: f64,
    pub hh_right: f64,
    /// Analytic envelope of the maximum shift, if the pulse condition matches.
    pub envelope: Option<f64>,
}

/// Maximum and half-height shifts of the central fringe. The half-height
/// level is half the actual peak height.
pub fn half_height_shift(model: &dyn ResonanceModel) -> Result<ShiftResult> {
    let config = model.scenario();
    let peak = peak_shift(model)?;
    let level = 0.5 * peak.peak_height;
    let p = |d: f64| model.excitation(d);
    if p(-peak.lobe)? >= level {
        return Err(Error::MissingCrossing { side: "left" });
    }
    if p(peak.lobe)? >= level {
        return Err(Error::MissingCrossing { side: "right" });
    }
    let hh_left = bisect_level(p, -peak.lobe, peak.delta_max, level, 0.0)?;
    let hh_right = bisect_level(p, peak.delta_max, peak.lobe, level, 0.0)?;
    let delta_hh = 0.5 * (hh_left + hh_right);
    let c = &config.constants;
    Ok(ShiftResult {
        delta_max: peak.delta_max,
        delta_hh,
        frac_max: c.fractional(peak.delta_max),
        frac_hh: c.fractional(delta_hh),
        peak_height: peak.peak_height,
        hh_left,
        hh_right,
        envelope: envelope(config),
    })
}

/// Shifts of the exact quantum curve.
pub fn quantum_shifts(config: &ScenarioConfig) -> Result<ShiftResult> {
    half_height_shift(&QuantumModel::new(*config)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SemiclassicalModel;
    use crate::physics::PhysicalConstants;

    #[test]
    fn lobe_of_pi_pulse_and_ramsey() {
        let c = PhysicalConstants::cesium();
        let cfg = ScenarioConfig::rabi(c, 1e-3, 3e-3, Pulse::PiPulse);
        let generic = ScenarioConfig {
            pulse: Pulse::ExplicitOmega(cfg.rabi_frequency()),
            ..cfg
        };
        let a = central_lobe(&cfg).unwrap();
        let b = central_lobe(&generic).unwrap();
        assert!((a - b).abs() < 1e-6 * a, "{a} {b}");
        let ram = ScenarioConfig::ramsey(c, 1e-3, 1.5e-3, 10.0, Pulse::HalfPiPulse);
        let z = central_lobe(&ram).unwrap();
        // fringe spacing set by the gap flight time
        let t = ram.gap_time() + ram.flight_time();
        assert!(z * t > 2.0 && z * t < 3.5, "{}", z * t);
    }

    #[test]
    fn semiclassical_curve_has_no_shift() {
        let c = PhysicalConstants::cesium();
        for cfg in [
            ScenarioConfig::rabi(c, 0.05, 3e-3, Pulse::PiPulse),
            ScenarioConfig::ramsey(c, 0.05, 1.5e-3, 10.0, Pulse::HalfPiPulse),
        ] {
            let model = SemiclassicalModel::new(cfg).unwrap();
            let s = half_height_shift(&model).unwrap();
            let scale = s.hh_right - s.hh_left;
            assert!(s.delta_max.abs() < 1e-12 * scale, "{}", s.delta_max / scale);
            assert!(s.delta_hh.abs() < 1e-14 * scale, "{}", s.delta_hh / scale);
            assert!((s.peak_height - 1.0).abs() < 1e-12);
            assert!(s.hh_left < s.delta_max && s.delta_max < s.hh_right);
        }
    }

    #[test]
    fn quantum_half_height_points_sit_on_half_peak() {
        let cfg = ScenarioConfig::rabi(PhysicalConstants::cesium(), 2e-5, 3e-3, Pulse::PiPulse);
        let model = QuantumModel::new(cfg).unwrap();
        let s = half_height_shift(&model).unwrap();
        for x in [s.hh_left, s.hh_right] {
            assert!((model.excitation(x).unwrap() - 0.5 * s.peak_height).abs() < 1e-12);
        }
        assert_eq!(s.delta_hh, 0.5 * (s.hh_left + s.hh_right));
        assert!(s.delta_hh > 0.0);
    }
}
