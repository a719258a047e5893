//! Resonance models: anything that maps a detuning to an excitation
//! probability for a given scenario. Shift extraction works on
//! `&dyn ResonanceModel`, so the exact quantum curve, the classical-motion
//! baseline and velocity-averaged curves are interchangeable.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::physics::ScenarioConfig;
use crate::semiclassical::semiclassical_probability;
use crate::transfer::excitation_probability;

pub trait ResonanceModel: Send + Sync {
    fn name(&self) -> &str;

    fn scenario(&self) -> &ScenarioConfig;

    /// Excitation probability at detuning `delta` (rad/s).
    fn excitation(&self, delta: f64) -> Result<f64>;
}

/// Exact transfer-matrix probability of transmitted excited atoms.
#[derive(Debug, Clone)]
pub struct QuantumModel {
    config: ScenarioConfig,
}

impl QuantumModel {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { config })
    }
}

impl ResonanceModel for QuantumModel {
    fn name(&self) -> &str {
        "quantum"
    }

    fn scenario(&self) -> &ScenarioConfig {
        &self.config
    }

    fn excitation(&self, delta: f64) -> Result<f64> {
        excitation_probability(&self.config, delta)
    }
}

/// Classical atomic motion; symmetric in the detuning.
#[derive(Debug, Clone)]
pub struct SemiclassicalModel {
    config: ScenarioConfig,
}

impl SemiclassicalModel {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { config })
    }
}

impl ResonanceModel for SemiclassicalModel {
    fn name(&self) -> &str {
        "semiclassical"
    }

    fn scenario(&self) -> &ScenarioConfig {
        &self.config
    }

    fn excitation(&self, delta: f64) -> Result<f64> {
        Ok(semiclassical_probability(&self.config, delta))
    }
}

pub type ModelFactory = fn(&ScenarioConfig) -> Result<Box<dyn ResonanceModel>>;

/// Name-keyed model factories.
#[derive(Clone, Default)]
pub struct ModelRegistry {
    factories: BTreeMap<String, ModelFactory>,
}

impl ModelRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry with the `quantum` and `semiclassical` models.
    pub fn builtin() -> Self {
        let mut registry = Self::new();
        registry.register("quantum", |c| Ok(Box::new(QuantumModel::new(*c)?)));
        registry.register("semiclassical", |c| {
            Ok(Box::new(SemiclassicalModel::new(*c)?))
        });
        registry
    }

    /// Adds or replaces a factory.
    pub fn register(&mut self, name: &str, factory: ModelFactory) {
        self.factories.insert(name.to_string(), factory);
    }

    pub fn create(&self, name: &str, config: &ScenarioConfig) -> Result<Box<dyn ResonanceModel>> {
        let factory = self.factories.get(name).ok_or_else(|| {
            Error::InvalidConfig(format!(
                "unknown model '{name}' (available: {})",
                self.names().join(", ")
            ))
        })?;
        factory(config)
    }

    pub fn names(&self) -> Vec<&str> {
        self.factories.keys().map(String::as_str).collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.factories.contains_key(name)
    }
}
