//! Declarative run configuration: a TOML file, then command-line overrides.

use std::path::Path;

use anyhow::{bail, Context, Result};
use coldclock::experiments::{GridSpec, Spacing, SweepOutputs, SweepRange, SweepVariable};
use coldclock::physics::{Geometry, PhysicalConstants, Pulse, ScenarioConfig};
use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub dimensionless: bool,
    pub mass: Option<f64>,
    pub model: Option<String>,
    #[serde(default)]
    pub scenario: ScenarioSection,
    #[serde(default)]
    pub curve: CurveSection,
    pub sweep: Option<SweepSection>,
    pub grid: Option<GridSection>,
    #[serde(default)]
    pub averaging: AveragingSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub velocity: Option<f64>,
    pub field_width: Option<f64>,
    pub gap_ratio: Option<f64>,
    pub pulse: Option<Pulse>,
    pub geometry: Option<Geometry>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub variable: SweepVariable,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    #[serde(default)]
    pub spacing: Spacing,
    #[serde(default)]
    pub outputs: SweepOutputs,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub velocity: Option<f64>,
    pub l_values: Vec<f64>,
    pub n_values: Vec<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AveragingSection {
    pub sigma_v: Option<f64>,
    pub samples: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Scenario-level command-line overrides.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub dimensionless: bool,
    pub mass: Option<f64>,
    pub velocity: Option<f64>,
    pub field_width: Option<f64>,
    pub gap_ratio: Option<f64>,
    pub pulse: Option<Pulse>,
    pub geometry: Option<Geometry>,
    pub model: Option<String>,
}

pub struct Resolved {
    pub scenario: ScenarioConfig,
    pub model: String,
}

pub fn constants(file: &FileConfig, o: &Overrides) -> Result<PhysicalConstants> {
    let mut c = if o.dimensionless || file.dimensionless {
        PhysicalConstants::dimensionless()
    } else {
        PhysicalConstants::cesium()
    };
    if let Some(m) = o.mass.or(file.mass) {
        c = c.with_mass(m);
    }
    c.validate()?;
    Ok(c)
}

pub fn resolve(file: &FileConfig, o: &Overrides) -> Result<Resolved> {
    let constants = constants(file, o)?;
    let dimensionless = o.dimensionless || file.dimensionless;
    let s = &file.scenario;
    let velocity = o
        .velocity
        .or(s.velocity)
        .unwrap_or(if dimensionless { 20.0 } else { 0.05 });
    let field_width =
        o.field_width
            .or(s.field_width)
            .unwrap_or(if dimensionless { 1.0 } else { 3e-3 });
    let gap_ratio = o.gap_ratio.or(s.gap_ratio);
    let geometry = match (o.geometry.or(s.geometry), gap_ratio) {
        (Some(g), _) => g,
        (None, Some(n)) if n > 0.0 => Geometry::Ramsey,
        (None, _) => Geometry::Rabi,
    };
    let pulse = o.pulse.or(s.pulse).unwrap_or(match geometry {
        Geometry::Rabi => Pulse::PiPulse,
        Geometry::Ramsey => Pulse::HalfPiPulse,
    });
    let scenario = match geometry {
        Geometry::Rabi => {
            if gap_ratio.is_some_and(|n| n != 0.0) {
                bail!("a Rabi scenario has no gap; drop gap_ratio or choose the ramsey geometry");
            }
            ScenarioConfig::rabi(constants, velocity, field_width, pulse)
        }
        Geometry::Ramsey => {
            let n = gap_ratio.context("the ramsey geometry needs a gap ratio N = L/l > 0")?;
            ScenarioConfig::ramsey(constants, velocity, field_width, n, pulse)
        }
    };
    scenario.validate()?;
    let model = o
        .model
        .clone()
        .or_else(|| file.model.clone())
        .unwrap_or_else(|| "quantum".into());
    Ok(Resolved { scenario, model })
}

pub fn sweep_range(section: &SweepSection) -> SweepRange {
    SweepRange {
        min: section.min,
        max: section.max,
        count: section.count,
        spacing: section.spacing,
    }
}

pub fn grid_spec(file: &FileConfig, o: &Overrides, section: &GridSection) -> Result<GridSpec> {
    let constants = constants(file, o)?;
    let velocity = o
        .velocity
        .or(section.velocity)
        .or(file.scenario.velocity)
        .unwrap_or(if constants == PhysicalConstants::dimensionless() {
            20.0
        } else {
            0.05
        });
    Ok(GridSpec {
        constants,
        velocity,
        l_values: section.l_values.clone(),
        n_values: section.n_values.clone(),
    })
}
