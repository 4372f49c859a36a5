use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("trace {0:.12} differs from 1")]
    Trace(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("unknown party label `{0}`")]
    UnknownLabel(String),

    #[error("invalid party selection: {0}")]
    InvalidSelection(String),

    #[error("operands must both be pure states or both be density matrices")]
    MixedKinds,

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("expected a pure state: {0}")]
    PureRequired(&'static str),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("state is not permutation symmetric (deviation {0:.3e})")]
    NotSymmetric(f64),

    #[error("closed form outside its domain: {0}")]
    OutOfDomain(String),

    #[error("invalid scan request: {0}")]
    Scan(String),

    #[error("state file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
