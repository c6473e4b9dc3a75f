//! Epistemically restricted phase-space theory over Z_d.

pub mod epistemic;
pub mod cli;
pub mod document;
pub mod equivalence;
pub mod error;
pub mod expr;
pub mod graining;
pub mod hilbert;
pub mod measurement;
pub mod render;
pub mod stabilizer;
pub mod wigner;
pub mod zmod;

pub use error::{Error, Result};

/// Exact rational used for every probability and quasiprobability.
pub type Rational = num_rational::Ratio<i64>;
