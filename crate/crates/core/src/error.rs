use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("malformed generalized linking matrix: {0}")]
    MalformedQ(String),
    #[error("vanishing contact surgery coefficient")]
    ZeroCoefficient,
    #[error("unknown atlas label `{0}`")]
    UnknownLabel(String),
    #[error("unknown component `{0}`")]
    UnknownComponent(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("parameters out of domain: {0}")]
    OutOfDomain(String),
    #[error("incomplete stabilization signs: {0}")]
    IncompleteSigns(String),
    #[error("invalid diagram: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
