use thiserror::Error;

use crate::model::Regime;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("lambda = 0 is the Invalid regime: the well has no sech term and cannot bind zero modes")]
    InvalidRegime,

    #[error("regime {regime:?} has no bound zero modes")]
    NoBoundStates { regime: Regime },

    #[error("mode belongs to regime {mode:?} but the potential is {potential:?}")]
    RegimeMismatch { mode: Regime, potential: Regime },

    #[error("n = {n} is not admissible: n must satisfy n < {bound}")]
    InadmissibleMode { n: usize, bound: f64 },

    #[error("ky_max = {ky_max} must exceed |mu| = {mu_abs}")]
    KyMaxTooSmall { ky_max: f64, mu_abs: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("empty sample sequence")]
    EmptySamples,

    #[error("sequence lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("norm {0:e} is too small to normalize")]
    DegenerateNorm(f64),

    #[error("decay fit needs at least 8 tail points, got {0}")]
    TooFewTailPoints(usize),

    #[error("tail amplitude underflowed at x = {0}")]
    UnderflowedTail(f64),

    #[error("length scale must be positive, got {0}")]
    InvalidLengthScale(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
