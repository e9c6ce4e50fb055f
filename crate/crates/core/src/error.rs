use thiserror::Error;

use crate::params::Situation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bright coupling vanishes: |Ω3|² + |Ω4|² = 0")]
    ZeroBrightCoupling,

    #[error("probe-side coupling vanishes: |Ω1|² + |Ω2|² = 0")]
    ZeroProbeSideCoupling,

    #[error("configuration is in situation {found:?}, operation requires {expected:?}")]
    WrongSituation { expected: Situation, found: Situation },

    #[error("no global dark state: β = 0")]
    NoDarkState,

    #[error("denominator Q is singular (|Q| = {magnitude:e}, threshold {threshold:e})")]
    SingularDenominator { magnitude: f64, threshold: f64 },

    #[error("linear system is singular")]
    SingularMatrix,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("no convergence after {duration:e} s: last change {change:e} exceeds {tolerance:e}")]
    NonConvergence {
        duration: f64,
        change: f64,
        tolerance: f64,
    },

    #[error("grid too narrow: {0}")]
    GridTooNarrow(String),

    #[error("step too large: {0}")]
    StepTooLarge(String),

    #[error("length {0} is not a power of two (>= 2)")]
    BadLength(usize),

    #[error("coefficients do not admit a {requested} soliton (κ2r·Θr = {product:e})")]
    WrongSign { requested: &'static str, product: f64 },

    #[error("envelopes are sampled on different grids")]
    GridMismatch,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
