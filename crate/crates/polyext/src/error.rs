use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("gamma pole: x = {0} is a nonpositive integer")]
    GammaPole(f64),
    #[error("bessel K requires t > 0, got t = {0}")]
    BesselDomain(f64),
    #[error("invalid fractional order: {0}")]
    InvalidOrder(String),
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),
    #[error("unknown test-function family: {0}")]
    UnknownFamily(String),
    #[error("quadrature tail dominates the integrand: {0}")]
    TailDominated(String),
    #[error("field file format: {0}")]
    FieldFormat(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
