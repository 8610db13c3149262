use thiserror::Error;

/// Errors raised by the spectral toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {residual:.3e} exceeds {eps:.3e})")]
    NotHermitian { residual: f64, eps: f64 },

    #[error("commutator norm {residual:.3e} exceeds {bound:.3e}; the pair does not commute")]
    CommutatorTooLarge { residual: f64, bound: f64 },

    #[error("operator is not positive: minimum eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in input")]
    NonFinite,

    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error("spectral image point ({s}, {t}) lies outside the closed quadrant")]
    ImageOutsideQuadrant { s: f64, t: f64 },

    #[error("point set is empty")]
    EmptyGamma,

    #[error("negative coordinate {0}")]
    NegativeCoordinate(f64),

    #[error("order {requested} exceeds embedding headroom {headroom}")]
    HeadroomExceeded { requested: usize, headroom: usize },

    #[error("product hypothesis violated: {condition} (residual {residual:.3e})")]
    HypothesisViolated { condition: String, residual: f64 },

    #[error("scaling constraint violated: {0}")]
    ModulusConstraintViolated(String),

    #[error("operator is not left-invertible (margin {margin:.3e})")]
    NotLeftInvertible { margin: f64 },

    #[error("model is not quasi-Brownian")]
    NotQuasiBrownian,

    #[error("s = 1 has no two-atom representing measure (linear growth branch)")]
    SEqualsOne,

    #[error("sequence too short: need {needed} entries, got {got}")]
    InsufficientLength { needed: usize, got: usize },

    #[error("pencil precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("sharp part of the spectrum is empty (E = 0)")]
    EmptySharpPart,

    #[error("flat part of the spectrum is empty")]
    EmptyFlatPart,

    #[error("norm of E exceeds one (max t = {0})")]
    ENormExceedsOne(f64),

    #[error("unknown region token `{0}`")]
    UnknownRegion(String),

    #[error("model file: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
