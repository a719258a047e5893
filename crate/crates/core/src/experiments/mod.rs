//! Reproduction harness: resonance curves, shift sweeps, l × N grids and
//! power-law fits, with CSV/JSON/SVG output.

mod curve;
mod fit;
mod grid;
pub mod output;
mod spectrum;
mod sweep;

pub use curve::{
    default_delta_grid, linspace, run_curve, CurvePair, ResonanceCurve, DEFAULT_GRID_POINTS,
};
pub use fit::{fit_inverse_square, fit_power_law, FitResult, InverseSquareFit};
pub use grid::{run_grid, GridCell, GridResult, GridSpec};
pub use spectrum::{amplitude_spectrum, spectral_peaks, SpectralLine};
pub use sweep::{
    run_shift_sweep, run_sweep, ShiftSweep, Spacing, SweepOutputs, SweepRange, SweepRow, SweepSpec,
    SweepVariable,
};
