//! Quantum-motion shifts of the central resonance fringe.

mod analytic;
mod averaging;
mod expansion;
mod peak;

pub use analytic::{
    analytic_max_shift_rabi, analytic_max_shift_ramsey_envelope, envelope, half_height_estimate,
    rabi_envelope,
};
pub use averaging::{gauss_hermite, velocity_average, VelocityAverage, VelocityAveragedModel};
pub use expansion::{gamma_expansion, ExpansionCoefficients};
pub use peak::{
    central_lobe, half_height_shift, peak_shift, quantum_shifts, PeakResult, ShiftResult,
};
