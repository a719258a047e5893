use rayon::prelude::*;
use serde::Serialize;

use super::output::{scenario_metadata, Column, Table};
use crate::error::{Error, Result};
use crate::model::ResonanceModel;
use crate::model::{QuantumModel, SemiclassicalModel};
use crate::physics::{rad_to_hz, Geometry, ScenarioConfig};

pub const DEFAULT_GRID_POINTS: usize = 2001;

/// 2001 points spanning ±4Ω. With Ω = 0 the span falls back to ±4π/T.
pub fn default_delta_grid(config: &ScenarioConfig) -> Vec<f64> {
    let omega = config.rabi_frequency();
    let half = if omega > 0.0 {
        4.0 * omega
    } else {
        4.0 * std::f64::consts::PI / config.flight_time()
    };
    linspace(-half, half, DEFAULT_GRID_POINTS)
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// A sampled resonance curve. Points where the model failed (channel
/// thresholds) are kept as `None` with the reason in `excluded`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceCurve {
    pub model: String,
    pub geometry: Geometry,
    pub config: ScenarioConfig,
    pub deltas: Vec<f64>,
    pub p12: Vec<Option<f64>>,
    pub excluded: Vec<(usize, String)>,
}

impl ResonanceCurve {
    pub fn sample(model: &dyn ResonanceModel, deltas: &[f64]) -> Self {
        let values: Vec<std::result::Result<f64, Error>> =
            deltas.par_iter().map(|&d| model.excitation(d)).collect();
        let mut excluded = Vec::new();
        let p12 = values
            .into_iter()
            .enumerate()
            .map(|(i, r)| match r {
                Ok(p) => Some(p),
                Err(e) => {
                    excluded.push((i, e.to_string()));
                    None
                }
            })
            .collect();
        Self {
            model: model.name().to_string(),
            geometry: model.scenario().geometry,
            config: *model.scenario(),
            deltas: deltas.to_vec(),
            p12,
            excluded,
        }
    }

    /// Largest sampled value and its detuning.
    pub fn sampled_max(&self) -> Option<(f64, f64)> {
        self.deltas
            .iter()
            .zip(&self.p12)
            .filter_map(|(&d, p)| p.map(|p| (d, p)))
            .fold(None, |best, (d, p)| match best {
                Some((_, bp)) if bp >= p => best,
                _ => Some((d, p)),
            })
    }
}

/// Quantum and semiclassical curves on a shared grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePair {
    pub quantum: ResonanceCurve,
    pub semiclassical: ResonanceCurve,
}

pub fn run_curve(config: &ScenarioConfig, deltas: &[f64]) -> Result<CurvePair> {
    Ok(CurvePair {
        quantum: ResonanceCurve::sample(&QuantumModel::new(*config)?, deltas),
        semiclassical: ResonanceCurve::sample(&SemiclassicalModel::new(*config)?, deltas),
    })
}

impl CurvePair {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(vec![
            Column::new("delta_rad_s", "rad/s"),
            Column::new("delta_hz", "Hz"),
            Column::new("p_quantum", "1"),
            Column::new("p_semiclassical", "1"),
            Column::new("status", ""),
        ]);
        t.meta("kind", "curve");
        scenario_metadata(&mut t, &self.quantum.config);
        t.meta("points", self.quantum.deltas.len());
        t.meta(
            "excluded",
            self.quantum.excluded.len() + self.semiclassical.excluded.len(),
        );
        let reason = |c: &ResonanceCurve, i: usize| {
            c.excluded
                .iter()
                .find(|(j, _)| *j == i)
                .map(|(_, r)| r.clone())
        };
        for (i, &d) in self.quantum.deltas.iter().enumerate() {
            let status = match (reason(&self.quantum, i), reason(&self.semiclassical, i)) {
                (None, None) => "ok".to_string(),
                (Some(r), _) | (None, Some(r)) => format!("excluded: {r}"),
            };
            t.push(vec![
                d.into(),
                rad_to_hz(d).into(),
                self.quantum.p12[i].into(),
                self.semiclassical.p12[i].into(),
                status.into(),
            ]);
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::{PhysicalConstants, Pulse};

    #[test]
    fn default_grid_spans_four_rabi_frequencies() {
        let cfg = ScenarioConfig::rabi(PhysicalConstants::cesium(), 5e-6, 3e-3, Pulse::PiPulse);
        let g = default_delta_grid(&cfg);
        assert_eq!(g.len(), 2001);
        assert_eq!(g[1000], 0.0);
        assert!((g[2000] - 4.0 * cfg.rabi_frequency()).abs() < 1e-15 * g[2000]);
    }

    #[test]
    fn uncoupled_curve_is_zero() {
        let cfg = ScenarioConfig::rabi(
            PhysicalConstants::cesium(),
            5e-6,
            3e-3,
            Pulse::ExplicitOmega(0.0),
        );
        let pair = run_curve(&cfg, &default_delta_grid(&cfg)).unwrap();
        assert!(pair.quantum.p12.iter().all(|p| *p == Some(0.0)));
    }

    #[test]
    fn threshold_points_are_recorded() {
        let c = PhysicalConstants::dimensionless();
        let cfg = ScenarioConfig::rabi(c, 2.0, 1.0, Pulse::ExplicitOmega(1.0));
        // q = 0 at Δ = -k²/2
        let pair = run_curve(&cfg, &[-2.0, 0.0]).unwrap();
        assert_eq!(pair.quantum.p12[0], None);
        assert_eq!(pair.quantum.excluded.len(), 1);
        let table = pair.to_table();
        assert!(table.to_csv_string().contains("excluded"));
    }
}
