//! Physical constants, scenario description, dressed-state algebra and the
//! channel wavenumbers of the piecewise-constant two-level problem.
//!
//! Everything is SI (rad/s for detunings and Rabi frequencies, 1/m for
//! wavenumbers). A dimensionless unit system with `hbar = mass = 1` is
//! available through [`PhysicalConstants::dimensionless`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Cesium mass as used throughout the figures, kg.
pub const CS_MASS: f64 = 2.2e-25;
/// Cs-133 hyperfine clock transition, Hz.
pub const CS_CLOCK_HZ: f64 = 9_192_631_770.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mass: f64,
    /// Atomic transition angular frequency, rad/s. Only used to turn shifts
    /// into fractional frequency errors.
    pub omega0: f64,
}

impl PhysicalConstants {
    pub fn cesium() -> Self {
        Self {
            hbar: HBAR,
            mass: CS_MASS,
            omega0: 2.0 * PI * CS_CLOCK_HZ,
        }
    }

    pub fn dimensionless() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            omega0: 1.0,
        }
    }

    pub fn with_mass(self, mass: f64) -> Self {
        Self { mass, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("hbar", self.hbar),
            ("mass", self.mass),
            ("omega0", self.omega0),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// `hbar / m`, m²/s.
    pub fn hbar_over_m(&self) -> f64 {
        self.hbar / self.mass
    }

    pub fn wavenumber(&self, velocity: f64) -> f64 {
        self.mass * velocity / self.hbar
    }

    pub fn velocity(&self, wavenumber: f64) -> f64 {
        self.hbar * wavenumber / self.mass
    }

    /// Kinetic energy over hbar, rad/s.
    pub fn kinetic_frequency(&self, k: f64) -> f64 {
        self.hbar * k * k / (2.0 * self.mass)
    }

    pub fn fractional(&self, shift: f64) -> f64 {
        shift / self.omega0
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::cesium()
    }
}

pub fn rad_to_hz(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

pub fn hz_to_rad(f: f64) -> f64 {
    f * (2.0 * PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Rabi,
    Ramsey,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Geometry::Rabi => "rabi",
            Geometry::Ramsey => "ramsey",
        })
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rabi" => Ok(Geometry::Rabi),
            "ramsey" => Ok(Geometry::Ramsey),
            other => Err(Error::InvalidConfig(format!("unknown geometry '{other}'"))),
        }
    }
}

/// How the Rabi frequency of each field zone is fixed.
///
/// The pulse conditions are the semiclassical ones evaluated at the incident
/// velocity: a resonant atom is inverted (`PiPulse`) or half-inverted
/// (`HalfPiPulse`) while crossing one zone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Pulse {
    PiPulse,
    HalfPiPulse,
    ExplicitOmega(f64),
}

impl fmt::Display for Pulse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pulse::PiPulse => f.write_str("pi"),
            Pulse::HalfPiPulse => f.write_str("pi2"),
            Pulse::ExplicitOmega(w) => write!(f, "omega={w:e}"),
        }
    }
}

impl FromStr for Pulse {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "pi" => Ok(Pulse::PiPulse),
            "pi2" | "pi/2" => Ok(Pulse::HalfPiPulse),
            _ => {
                let value = s
                    .strip_prefix("omega=")
                    .ok_or_else(|| Error::InvalidConfig(format!("unknown pulse '{s}'")))?;
                let omega: f64 = value
                    .parse()
                    .map_err(|_| Error::InvalidConfig(format!("bad Rabi frequency '{value}'")))?;
                Ok(Pulse::ExplicitOmega(omega))
            }
        }
    }
}

impl From<Pulse> for String {
    fn from(p: Pulse) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for Pulse {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Physical setup of one clock interrogation.
///
/// Field zones sit at `[0, l]` (Rabi) or `[0, l]` and `[l + L, 2l + L]`
/// (Ramsey).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub constants: PhysicalConstants,
    /// Incident velocity, m/s.
    pub velocity: f64,
    /// Width of each field zone, m.
    pub field_width: f64,
    /// Free gap between the two Ramsey zones, m. Zero for Rabi.
    pub gap: f64,
    pub pulse: Pulse,
    pub geometry: Geometry,
}

impl ScenarioConfig {
    pub fn rabi(
        constants: PhysicalConstants,
        velocity: f64,
        field_width: f64,
        pulse: Pulse,
    ) -> Self {
        Self {
            constants,
            velocity,
            field_width,
            gap: 0.0,
            pulse,
            geometry: Geometry::Rabi,
        }
    }

    /// Ramsey setup with the gap given as a multiple `gap_ratio` of the zone width.
    pub fn ramsey(
        constants: PhysicalConstants,
        velocity: f64,
        field_width: f64,
        gap_ratio: f64,
        pulse: Pulse,
    ) -> Self {
        Self {
            constants,
            velocity,
            field_width,
            gap: gap_ratio * field_width,
            pulse,
            geometry: Geometry::Ramsey,
        }
    }

    /// The Rabi configuration for `gap_ratio == 0` (pi pulse), Ramsey with
    /// pi/2 pulses otherwise.
    pub fn clock(
        constants: PhysicalConstants,
        velocity: f64,
        field_width: f64,
        gap_ratio: f64,
    ) -> Self {
        if gap_ratio == 0.0 {
            Self::rabi(constants, velocity, field_width, Pulse::PiPulse)
        } else {
            Self::ramsey(
                constants,
                velocity,
                field_width,
                gap_ratio,
                Pulse::HalfPiPulse,
            )
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.constants.validate()?;
        if !(self.velocity.is_finite() && self.velocity > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "velocity must be positive, got {}",
                self.velocity
            )));
        }
        if !(self.field_width.is_finite() && self.field_width > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "field width must be positive, got {}",
                self.field_width
            )));
        }
        match self.geometry {
            Geometry::Rabi if self.gap != 0.0 => {
                return Err(Error::InvalidConfig(
                    "Rabi geometry requires a zero gap".into(),
                ))
            }
            Geometry::Ramsey if !(self.gap.is_finite() && self.gap > 0.0) => {
                return Err(Error::InvalidConfig(
                    "Ramsey geometry requires a positive gap".into(),
                ))
            }
            _ => {}
        }
        if let Pulse::ExplicitOmega(w) = self.pulse {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "Rabi frequency must be >= 0, got {w}"
                )));
            }
        }
        Ok(())
    }

    /// Incident wavenumber `k = m v / hbar`.
    pub fn wavenumber(&self) -> f64 {
        self.constants.wavenumber(self.velocity)
    }

    /// Resolved Rabi frequency, rad/s.
    pub fn rabi_frequency(&self) -> f64 {
        let c = &self.constants;
        let k = self.wavenumber();
        match self.pulse {
            Pulse::PiPulse => c.hbar * k * PI / (self.field_width * c.mass),
            Pulse::HalfPiPulse => c.hbar * k * PI / (2.0 * self.field_width * c.mass),
            Pulse::ExplicitOmega(w) => w,
        }
    }

    /// Classical in-field flight time `T = l m / (hbar k)`.
    pub fn flight_time(&self) -> f64 {
        self.field_width * self.constants.mass / (self.constants.hbar * self.wavenumber())
    }

    /// Classical free-flight time across the Ramsey gap.
    pub fn gap_time(&self) -> f64 {
        self.gap * self.constants.mass / (self.constants.hbar * self.wavenumber())
    }

    /// `N = L / l`.
    pub fn gap_ratio(&self) -> f64 {
        self.gap / self.field_width
    }

    /// Field zones as `(x_left, x_right)` pairs.
    pub fn field_zones(&self) -> Vec<(f64, f64)> {
        let l = self.field_width;
        match self.geometry {
            Geometry::Rabi => vec![(0.0, l)],
            Geometry::Ramsey => vec![(0.0, l), (l + self.gap, 2.0 * l + self.gap)],
        }
    }

    /// Total extent of the interaction region.
    pub fn span(&self) -> (f64, f64) {
        let zones = self.field_zones();
        (zones[0].0, zones[zones.len() - 1].1)
    }

    /// Same scenario at another velocity with the Rabi frequency frozen at
    /// the value this scenario resolves to.
    pub fn at_velocity_fixed_omega(&self, velocity: f64) -> Self {
        Self {
            velocity,
            pulse: Pulse::ExplicitOmega(self.rabi_frequency()),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedPair {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub omega_prime: f64,
    pub eigvec_plus: [f64; 2],
    pub eigvec_minus: [f64; 2],
}

/// Eigenvalues `(lambda_plus, lambda_minus, omega_prime)` of the internal
/// block `[[0, Ω/2], [Ω/2, -Δ]]`.
///
/// The smaller-magnitude root is recovered from the product
/// `λ₊λ₋ = -Ω²/4`, which avoids cancellation when `|Δ| ≫ Ω`.
pub fn dressed_eigenvalues(delta: f64, omega: f64) -> (f64, f64, f64) {
    let omega_prime = delta.hypot(omega);
    if delta == 0.0 {
        return (0.5 * omega, -0.5 * omega, omega_prime);
    }
    if delta > 0.0 {
        let minus = 0.5 * (-delta - omega_prime);
        let plus = -0.25 * omega * omega / minus;
        (plus, minus, omega_prime)
    } else {
        let plus = 0.5 * (-delta + omega_prime);
        let minus = -0.25 * omega * omega / plus;
        (plus, minus, omega_prime)
    }
}

pub fn dressed_pair(delta: f64, omega: f64) -> Result<DressedPair> {
    if omega == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    if !(omega > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "Rabi frequency must be positive, got {omega}"
        )));
    }
    let (lambda_plus, lambda_minus, omega_prime) = dressed_eigenvalues(delta, omega);
    Ok(DressedPair {
        lambda_plus,
        lambda_minus,
        omega_prime,
        eigvec_plus: [1.0, 2.0 * lambda_plus / omega],
        eigvec_minus: [1.0, 2.0 * lambda_minus / omega],
    })
}

/// Square root on the branch with non-negative imaginary part.
pub fn branch_sqrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return if z.re >= 0.0 {
            Complex64::new(z.re.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-z.re).sqrt())
        };
    }
    let w = z.sqrt();
    if w.im < 0.0 {
        -w
    } else {
        w
    }
}

/// Wavenumbers of the ground channel, the excited channel and the two dressed
/// modes inside a field zone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelWavenumbers {
    pub k: f64,
    pub q: Complex64,
    pub k_plus: Complex64,
    pub k_minus: Complex64,
    // kappa² - k² for q, k₊, k₋; kept so that kappa - k can be formed
    // without cancellation.
    q_offset: f64,
    plus_offset: f64,
    minus_offset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Excited,
    Plus,
    Minus,
}

impl ChannelWavenumbers {
    /// `kappa - k` for the requested mode, computed as
    /// `(kappa² - k²) / (kappa + k)`.
    pub fn excess(&self, mode: Mode) -> Complex64 {
        let (kappa, offset) = match mode {
            Mode::Excited => (self.q, self.q_offset),
            Mode::Plus => (self.k_plus, self.plus_offset),
            Mode::Minus => (self.k_minus, self.minus_offset),
        };
        Complex64::new(offset, 0.0) / (kappa + self.k)
    }

    pub fn excited_open(&self) -> bool {
        self.q.im == 0.0 && self.q.re > 0.0
    }
}

pub fn channel_wavenumbers(
    k: f64,
    delta: f64,
    omega: f64,
    constants: &PhysicalConstants,
) -> ChannelWavenumbers {
    let scale = 2.0 * constants.mass / constants.hbar;
    let (lambda_plus, lambda_minus, _) = dressed_eigenvalues(delta, omega);
    let q_offset = scale * delta;
    let plus_offset = -scale * lambda_plus;
    let minus_offset = -scale * lambda_minus;
    let k2 = k * k;
    ChannelWavenumbers {
        k,
        q: branch_sqrt(Complex64::new(k2 + q_offset, 0.0)),
        k_plus: branch_sqrt(Complex64::new(k2 + plus_offset, 0.0)),
        k_minus: branch_sqrt(Complex64::new(k2 + minus_offset, 0.0)),
        q_offset,
        plus_offset,
        minus_offset,
    }
}

/// Detuning seen by the atom when the coupling is a two-photon Raman
/// transition with effective wavenumber `k_l`.
pub fn effective_detuning(laser_detuning: f64, k_l: f64, constants: &PhysicalConstants) -> f64 {
    laser_detuning - constants.hbar * k_l * k_l / (2.0 * constants.mass)
}

/// Time resolution `hbar / E` of a particle-activated clock at kinetic
/// energy `E = m v² / 2`.
pub fn peres_bound(velocity: f64, constants: &PhysicalConstants) -> f64 {
    let energy = 0.5 * constants.mass * velocity * velocity;
    constants.hbar / energy
}
