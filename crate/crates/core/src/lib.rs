#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Exact transfer-matrix treatment of a two-level atom crossing one (Rabi) or
//! two (Ramsey) constant-field zones, and the quantum-motion shifts of the
//! resulting clock resonance.

pub mod error;
pub mod experiments;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod physics;
pub mod search;
pub mod semiclassical;
pub mod shifts;
pub mod transfer;

pub use error::{Error, Result};
