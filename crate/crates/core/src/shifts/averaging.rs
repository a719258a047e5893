use nalgebra::{DMatrix, SymmetricEigen};

use super::peak::{central_lobe, half_height_shift, ShiftResult};
use crate::error::{Error, Result};
use crate::model::ResonanceModel;
use crate::physics::ScenarioConfig;
use crate::transfer::excitation_probability;

/// Nodes whose normalised weight is below this cannot change a double and
/// are dropped.
const NEGLIGIBLE_WEIGHT: f64 = 1e-17;

/// Gauss–Hermite nodes and weights for `∫ e^{-x²} f(x) dx`, from the
/// eigen-decomposition of the Jacobi matrix.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        let b = (i as f64 / 2.0).sqrt();
        jacobi[(i, i - 1)] = b;
        jacobi[(i - 1, i)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|j| {
            let v0 = eig.eigenvectors[(0, j)];
            (eig.eigenvalues[j], std::f64::consts::PI.sqrt() * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Excitation probability averaged over a Gaussian velocity distribution,
/// with the Rabi frequency fixed by the mean velocity.
#[derive(Debug, Clone)]
pub struct VelocityAveragedModel {
    mean: ScenarioConfig,
    sigma_v: f64,
    samples: Vec<(ScenarioConfig, f64)>,
}

impl VelocityAveragedModel {
    pub fn new(config: &ScenarioConfig, sigma_v: f64, n_samples: usize) -> Result<Self> {
        config.validate()?;
        let v = config.velocity;
        if !(sigma_v >= 0.0 && sigma_v < v / 3.0) {
            return Err(Error::InvalidConfig(format!(
                "velocity spread {sigma_v} must lie in [0, v/3) with v = {v}"
            )));
        }
        if n_samples == 0 {
            return Err(Error::InvalidConfig(
                "at least one quadrature node is required".into(),
            ));
        }
        let mean = config.at_velocity_fixed_omega(v);
        let (nodes, weights) = gauss_hermite(n_samples);
        let norm = std::f64::consts::PI.sqrt();
        let samples: Vec<(ScenarioConfig, f64)> = nodes
            .iter()
            .zip(&weights)
            .map(|(&x, &w)| (v + std::f64::consts::SQRT_2 * sigma_v * x, w / norm))
            .filter(|&(_, w)| w > NEGLIGIBLE_WEIGHT)
            .map(|(vi, w)| (mean.at_velocity_fixed_omega(vi), w))
            .collect();

        // every node must keep all channels open across the central lobe
        let lobe = central_lobe(&mean)?;
        let omega = mean.rabi_frequency();
        let slowest = samples
            .iter()
            .map(|(c, _)| c.velocity)
            .fold(f64::INFINITY, f64::min);
        let c = &mean.constants;
        if !(slowest > 0.0) || c.kinetic_frequency(c.wavenumber(slowest)) <= lobe + omega {
            return Err(Error::ReflectionRegime(format!(
                "slowest sampled velocity {slowest:.3e} m/s has kinetic frequency below Δ + Ω = {:.3e} rad/s",
                lobe + omega
            )));
        }
        Ok(Self {
            mean,
            sigma_v,
            samples,
        })
    }

    pub fn sigma_v(&self) -> f64 {
        self.sigma_v
    }

    /// Sampled `(velocity, weight)` pairs.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        self.samples.iter().map(|(c, w)| (c.velocity, *w)).collect()
    }
}

impl ResonanceModel for VelocityAveragedModel {
    fn name(&self) -> &str {
        "velocity-averaged"
    }

    fn scenario(&self) -> &ScenarioConfig {
        &self.mean
    }

    fn excitation(&self, delta: f64) -> Result<f64> {
        self.samples.iter().try_fold(0.0, |acc, (c, w)| {
            Ok(acc + w * excitation_probability(c, delta)?)
        })
    }
}

#[derive(Debug, Clone)]
pub struct VelocityAverage {
    pub model: VelocityAveragedModel,
    pub shifts: ShiftResult,
}

/// Averages the quantum curve over `v' ~ Normal(v, sigma_v)` and recomputes
/// both shifts on the averaged curve.
pub fn velocity_average(
    config: &ScenarioConfig,
    sigma_v: f64,
    n_samples: usize,
) -> Result<VelocityAverage> {
    let model = VelocityAveragedModel::new(config, sigma_v, n_samples)?;
    let shifts = half_height_shift(&model)?;
    Ok(VelocityAverage { model, shifts })
}
