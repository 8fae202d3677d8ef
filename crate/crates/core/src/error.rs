use thiserror::Error;

use crate::lattice::SpinConfiguration;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("configuration {value:#b} does not fit in {n_sites} sites")]
    InvalidConfiguration { value: u64, n_sites: usize },

    #[error("site index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("signature width {got} does not match expected width {expected}")]
    SignatureWidth { got: usize, expected: usize },

    #[error("basis not closed under the Hamiltonian: {from} reaches {escaped}")]
    ClosureViolation {
        from: SpinConfiguration,
        escaped: SpinConfiguration,
    },

    #[error("resource limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("malformed polynomial: {0}")]
    MalformedPolynomial(String),

    #[error("unsupported symmetry sector: {0}")]
    UnsupportedSymmetry(String),

    #[error("matrix is not symmetric (defect {defect:e})")]
    NotSymmetric { defect: f64 },

    #[error("eigensolver failed to converge for eigenvalue {index}")]
    NoConvergence { index: usize },

    #[error("too few levels: {got} after filtering, need at least {needed}")]
    TooFewLevels { got: usize, needed: usize },

    #[error("degenerate interpolation base: value {value} repeats at positions {first} and {second}")]
    DegenerateBase {
        value: f64,
        first: usize,
        second: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
