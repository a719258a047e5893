//! Independent check of the transfer-matrix amplitudes: direct numerical
//! integration of the coupled stationary Schrödinger equation.
//!
//! Two solutions are started at the right edge of the interaction region
//! with purely outgoing data (one per internal channel), integrated leftward
//! with an embedded Dormand–Prince 5(4) pair, decomposed into plane waves on
//! the left, and combined so that the incoming wave is a unit ground-state
//! wave. Integrating toward the left keeps closed-channel solutions on
//! their growing branch.
//!
//! The state is `(φ₁, φ₂, φ₁'/k, φ₂'/k)` so all components are O(1).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::physics::{branch_sqrt, ScenarioConfig};
use crate::transfer::{flux_weights, ScatteringAmplitudes};

type State = [Complex64; 4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepControl {
    /// Embedded error control on the scaled state.
    Adaptive {
        rtol: f64,
        atol: f64,
        max_steps: usize,
    },
    /// Uniform steps of (at most) `step` metres, used for convergence studies.
    Fixed { step: f64 },
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl::Adaptive {
            rtol: 1e-13,
            atol: 1e-15,
            max_steps: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeState {
    pub phi1: Complex64,
    pub phi2: Complex64,
    pub dphi1: Complex64,
    pub dphi2: Complex64,
    pub x: f64,
}

impl OdeState {
    /// Probability current `Σⱼ Im(φⱼ* φⱼ')` (in units of hbar/m), conserved
    /// because the coupling matrix is real symmetric.
    pub fn flux(&self) -> f64 {
        (self.phi1.conj() * self.dphi1).im + (self.phi2.conj() * self.dphi2).im
    }

    fn from_scaled(y: &State, k: f64, x: f64) -> Self {
        Self {
            phi1: y[0],
            phi2: y[1],
            dphi1: y[2] * k,
            dphi2: y[3] * k,
            x,
        }
    }

    fn scaled(&self, k: f64) -> State {
        [self.phi1, self.phi2, self.dphi1 / k, self.dphi2 / k]
    }
}

#[derive(Debug, Clone, Copy)]
struct Equation {
    k: f64,
    /// `q² = k² + 2mΔ/ħ`
    q2: f64,
    /// `mΩ/ħ`
    coupling: f64,
}

impl Equation {
    fn rhs(&self, y: &State, field: bool) -> State {
        let cpl = if field { self.coupling } else { 0.0 };
        let k = self.k;
        [
            y[2] * k,
            y[3] * k,
            (y[0] * (-k * k) + y[1] * cpl) / k,
            (y[1] * (-self.q2) + y[0] * cpl) / k,
        ]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PropagationStats {
    pub steps: usize,
    pub rejected: usize,
}

// Dormand–Prince 5(4) tableau (nodes 0, 1/5, 3/10, 4/5, 8/9, 1, 1).
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B_ERR: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// One Dormand–Prince step; returns the 5th-order solution and the error estimate.
fn dp_step(eq: &Equation, field: bool, y: &State, h: f64) -> (State, State) {
    let zero = Complex64::new(0.0, 0.0);
    let mut ks: [State; 7] = [[zero; 4]; 7];
    ks[0] = eq.rhs(y, field);
    for s in 1..7 {
        let mut ys = *y;
        for j in 0..s {
            let coef = h * A[s][j];
            if coef != 0.0 {
                for i in 0..4 {
                    ys[i] += ks[j][i] * coef;
                }
            }
        }
        ks[s] = eq.rhs(&ys, field);
    }
    let mut next = *y;
    let mut err = [zero; 4];
    for j in 0..7 {
        for i in 0..4 {
            next[i] += ks[j][i] * (h * B[j]);
            err[i] += ks[j][i] * (h * B_ERR[j]);
        }
    }
    (next, err)
}

/// Integrates from `from` to `to` (either direction) with constant coefficients.
fn integrate_segment(
    eq: &Equation,
    field: bool,
    mut y: State,
    from: f64,
    to: f64,
    control: &StepControl,
    stats: &mut PropagationStats,
) -> Result<State> {
    let length = to - from;
    if length == 0.0 {
        return Ok(y);
    }
    let dir = length.signum();
    match *control {
        StepControl::Fixed { step } => {
            let n = (length.abs() / step).ceil().max(1.0) as usize;
            let h = length / n as f64;
            for _ in 0..n {
                y = dp_step(eq, field, &y, h).0;
                stats.steps += 1;
            }
            Ok(y)
        }
        StepControl::Adaptive {
            rtol,
            atol,
            max_steps,
        } => {
            let kmax = eq.k.max(eq.q2.abs().sqrt()).max((eq.coupling).abs().sqrt());
            let mut h = (0.05 / kmax).min(length.abs()) * dir;
            let mut x = from;
            let h_min = 1e-14 * length.abs().max(from.abs());
            while (to - x) * dir > 0.0 {
                if (x + h - to) * dir > 0.0 {
                    h = to - x;
                }
                let (next, err) = dp_step(eq, field, &y, h);
                let mut norm = 0.0;
                for i in 0..4 {
                    let scale = atol + rtol * y[i].norm().max(next[i].norm());
                    norm += (err[i].norm() / scale).powi(2);
                }
                let norm = (norm / 4.0).sqrt();
                if norm <= 1.0 {
                    x = if (to - (x + h)) * dir <= 0.0 {
                        to
                    } else {
                        x + h
                    };
                    y = next;
                    stats.steps += 1;
                    if stats.steps > max_steps {
                        return Err(Error::StepUnderflow { x });
                    }
                } else {
                    stats.rejected += 1;
                }
                let factor = if norm == 0.0 {
                    5.0
                } else {
                    (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0)
                };
                h *= factor;
                if h.abs() < h_min {
                    return Err(Error::StepUnderflow { x });
                }
            }
            Ok(y)
        }
    }
}

fn equation(config: &ScenarioConfig, delta: f64) -> Equation {
    let c = &config.constants;
    let k = config.wavenumber();
    Equation {
        k,
        q2: k * k + 2.0 * c.mass * delta / c.hbar,
        coupling: c.mass * config.rabi_frequency() / c.hbar,
    }
}

/// Region boundaries from right to left, with a field flag per segment.
fn segments_leftward(config: &ScenarioConfig) -> Vec<(f64, f64, bool)> {
    let zones = config.field_zones();
    let mut segs = Vec::new();
    for (i, &(x1, x2)) in zones.iter().enumerate().rev() {
        segs.push((x2, x1, true));
        if i > 0 {
            let prev_right = zones[i - 1].1;
            if x1 > prev_right {
                segs.push((x1, prev_right, false));
            }
        }
    }
    segs
}

/// Propagates an arbitrary state leftward from the right edge of the
/// interaction region to its left edge.
pub fn propagate_leftward(
    config: &ScenarioConfig,
    delta: f64,
    start: &OdeState,
    control: &StepControl,
) -> Result<(OdeState, PropagationStats)> {
    config.validate()?;
    let eq = equation(config, delta);
    let mut stats = PropagationStats::default();
    let mut y = start.scaled(eq.k);
    for (from, to, field) in segments_leftward(config) {
        y = integrate_segment(&eq, field, y, from, to, control, &mut stats)?;
    }
    let x_left = config.span().0;
    Ok((OdeState::from_scaled(&y, eq.k, x_left), stats))
}

/// Scattering amplitudes for ground-state incidence from the left by direct
/// integration of the coupled equations.
pub fn integrate_sse(
    config: &ScenarioConfig,
    delta: f64,
    control: &StepControl,
) -> Result<ScatteringAmplitudes> {
    config.validate()?;
    let eq = equation(config, delta);
    let k = eq.k;
    let q = branch_sqrt(Complex64::new(eq.q2, 0.0));
    if q.norm() == 0.0 {
        return Err(Error::Threshold {
            delta,
            which: "excited channel q = 0",
        });
    }
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (x_left, x_right) = config.span();

    // Outgoing data referenced to x_right: e^{ik(x - x_R)} and e^{iq(x - x_R)}.
    let ground = OdeState {
        phi1: one,
        phi2: zero,
        dphi1: i * k,
        dphi2: zero,
        x: x_right,
    };
    let excited = OdeState {
        phi1: zero,
        phi2: one,
        dphi1: zero,
        dphi2: i * q,
        x: x_right,
    };
    let (g, _) = propagate_leftward(config, delta, &ground, control)?;
    let (e, _) = propagate_leftward(config, delta, &excited, control)?;

    // Plane-wave decomposition at x_left, coefficients of e^{±ikx}, e^{±iqx}.
    let decompose = |s: &OdeState| {
        let a = 0.5 * (s.phi1 + s.dphi1 / (i * k)) * (-i * k * x_left).exp();
        let b = 0.5 * (s.phi1 - s.dphi1 / (i * k)) * (i * k * x_left).exp();
        let c = 0.5 * (s.phi2 + s.dphi2 / (i * q)) * (-i * q * x_left).exp();
        let d = 0.5 * (s.phi2 - s.dphi2 / (i * q)) * (i * q * x_left).exp();
        [a, b, c, d]
    };
    let cg = decompose(&g);
    let ce = decompose(&e);

    // a = 1, c = 0 for the physical combination α·ground + β·excited.
    let det = cg[0] * ce[2] - ce[0] * cg[2];
    if !(det.norm() > 1e-300) {
        return Err(Error::Singular {
            context: "oracle matching system",
        });
    }
    let alpha = ce[2] / det;
    let beta = -cg[2] / det;

    Ok(ScatteringAmplitudes {
        t11: alpha * (-i * k * x_right).exp(),
        t12: beta * (-i * q * x_right).exp(),
        r11: alpha * cg[1] + beta * ce[1],
        r12: alpha * cg[3] + beta * ce[3],
        flux_weights: flux_weights(&crate::physics::channel_wavenumbers(
            k,
            delta,
            config.rabi_frequency(),
            &config.constants,
        )),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physics::{PhysicalConstants, Pulse};
    use std::f64::consts::PI;

    #[test]
    fn uncoupled_transmission_is_unity() {
        let c = PhysicalConstants::dimensionless();
        let cfg = ScenarioConfig::ramsey(c, 12.0, 1.0, 2.0, Pulse::ExplicitOmega(0.0));
        let amp = integrate_sse(&cfg, 3.0, &StepControl::default()).unwrap();
        assert!((amp.t11 - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        assert!(amp.t12.norm() < 1e-10);
        assert!(amp.r11.norm() < 1e-10);
    }

    #[test]
    fn flux_is_conserved_along_integration() {
        let c = PhysicalConstants::dimensionless();
        let cfg = ScenarioConfig::rabi(c, 20.0, 1.0, Pulse::PiPulse);
        let start = OdeState {
            phi1: Complex64::new(1.0, 0.0),
            phi2: Complex64::new(0.0, 0.0),
            dphi1: Complex64::new(0.0, 20.0),
            dphi2: Complex64::new(0.0, 0.0),
            x: 1.0,
        };
        let (end, stats) = propagate_leftward(&cfg, 5.0, &start, &StepControl::default()).unwrap();
        assert!(stats.steps > 10);
        assert!(((end.flux() - start.flux()) / start.flux()).abs() < 1e-9);
    }

    #[test]
    fn oracle_amplitudes_conserve_flux() {
        let c = PhysicalConstants::dimensionless();
        let cfg = ScenarioConfig::rabi(c, 20.0, 1.0, Pulse::PiPulse);
        for delta in [0.0, 10.0 * PI, -10.0 * PI] {
            let amp = integrate_sse(&cfg, delta, &StepControl::default()).unwrap();
            assert!((amp.flux_sum() - 1.0).abs() < 1e-9, "{}", amp.flux_sum());
        }
    }

    #[test]
    fn segments_cover_ramsey_span() {
        let c = PhysicalConstants::dimensionless();
        let cfg = ScenarioConfig::ramsey(c, 1.0, 1.0, 3.0, Pulse::HalfPiPulse);
        let segs = segments_leftward(&cfg);
        assert_eq!(
            segs,
            vec![(5.0, 4.0, true), (4.0, 1.0, false), (1.0, 0.0, true)]
        );
    }
}
