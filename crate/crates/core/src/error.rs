use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),

    #[error("field order {0} is outside the supported range 2..=289")]
    FieldTooLarge(u32),

    #[error("{0} has no multiplicative inverse or logarithm (zero element)")]
    ZeroElement(&'static str),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("size budget exceeded: {0}")]
    Budget(String),

    #[error("class {0} carries no GL(2,q) category tag")]
    MissingCategory(usize),

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("eigenvalue collision persisted after {0} reseeds; refusing to guess a split")]
    DegenerateSplit(usize),

    #[error("imaginary residual {residual:e} exceeds tolerance on {what}")]
    ComplexResidual { what: String, residual: f64 },

    #[error("certificate verification failed: {0}")]
    Verification(String),

    #[error("least eigenvalue {0} is not negative")]
    NonNegativeTau(f64),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
