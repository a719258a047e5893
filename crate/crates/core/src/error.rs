use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The Rabi frequency is zero where a dressed basis is required.
    #[error("dressed basis undefined for zero Rabi frequency")]
    ZeroCoupling,

    /// A channel or dressed-mode wavenumber vanishes at this detuning; the
    /// plane-wave basis is degenerate there.
    #[error("channel threshold at detuning {delta} rad/s ({which})")]
    Threshold { delta: f64, which: &'static str },

    #[error("singular matrix in {context}")]
    Singular { context: &'static str },

    #[error("no interior maximum in bracket [{lo}, {hi}] rad/s")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("half-height crossing missing on the {side} side of the peak")]
    MissingCrossing { side: &'static str },

    #[error("finite-difference derivative did not converge (best relative change {best:e})")]
    DerivativeNotConverged { best: f64 },

    #[error("integration step underflow at x = {x} m")]
    StepUnderflow { x: f64 },

    #[error("velocity cloud reaches the reflection-dominated regime: {0}")]
    ReflectionRegime(String),

    #[error("fit rejected: {0}")]
    Fit(String),
}
