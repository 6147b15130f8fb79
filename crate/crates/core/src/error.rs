use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("element index {index} out of range for a mesh with {n_elements} elements")]
    ElementIndex { index: usize, n_elements: usize },

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("coordinate {0} lies outside the reference interval [0, 1]")]
    OutsideReference(f64),

    #[error("invalid flux parameters: {0}")]
    InvalidFlux(String),

    #[error("unknown flux preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is singular (zero pivot in column {column})")]
    Singular { column: usize },

    #[error("matrix block {block} is not positive definite")]
    NotPositiveDefinite { block: usize },

    #[error("operator of size {n} exceeds the dense limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("eigenvalue iteration did not converge ({found} of {n} eigenvalues found)")]
    NoConvergence {
        n: usize,
        found: usize,
        partial: Vec<(f64, f64)>,
    },

    #[error("time {0} is not sampled by the trajectory")]
    TimeNotSampled(f64),
}

impl Error {
    /// Numerical failures as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. } | Error::NotPositiveDefinite { .. } | Error::NoConvergence { .. }
        )
    }
}
