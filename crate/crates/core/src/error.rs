use crate::C64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("denominator has a zero inside the closed bidisk near ({z1}, {z2})")]
    Stability { z1: C64, z2: C64 },
    #[error("p and its reflection share a common factor")]
    Atorality,
    #[error("symbol is not strictly contractive on the disk (|f| = {0} somewhere)")]
    NotContractive(f64),
    #[error("denominator vanishes at ({z1}, {z2})")]
    SingularPoint { z1: C64, z2: C64 },
    #[error("tau = {0} lies within tolerance of the exceptional set")]
    ExceptionalPoint(C64),
    #[error("coefficient matrix of the basis is identically singular")]
    DegenerateBasis,
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
