//! Signatures of iterated integrals for periodic scalar ODEs
//! dv/dx = sum_i a_i(x) v^{i+1} on (0, 2pi], and the machinery built on them:
//! Poincare return maps, center detection, a path group on coefficient
//! sequences, center generators, and the polar reduction of planar systems.
//!
//! Everything downstream of the coefficient functions runs in exact
//! arithmetic over Q(i)[pi, 1/pi] whenever the inputs are exact; numeric
//! fallbacks (floats, sampled grids) use thresholds scaled by a priori
//! integral bounds.

pub mod centergen;
pub mod cli;
pub mod freealg;
pub mod funcs;
pub mod iint;
pub mod json;
pub mod oracle;
pub mod pathgroup;
pub mod planar;
pub mod returnmap;
pub mod scalar;
pub mod words;

pub use funcs::{fn_add, fn_mul, mean_free, CoeffFn, CoeffSeq, PiecewiseTrig, QuasiTrigPoly, SampledFn};
pub use scalar::{GRat, QPi, Scalar};

/// Crate-wide error type; the CLI maps the variants onto exit codes.
#[derive(thiserror::Error, Debug)]
pub enum Error {
    /// Malformed input (bad JSON, bad schema, unparsable scalar strings).
    #[error("malformed input: {0}")]
    Input(String),
    /// An operation precondition was violated (cutoff mismatch, radius
    /// outside the certified disc, non-periodic generator data, ...).
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A numeric routine failed to converge or stepped below resolution.
    #[error("numeric failure: {0}")]
    Numeric(String),
}
