use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {max_dev:.3e}, tolerance {tol:.3e})")]
    NotHermitian { max_dev: f64, tol: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPsd { eigenvalue: f64 },

    #[error("sequence is not orthonormal: {context}")]
    NotOnb { context: String },

    #[error("sequence is not a frame for the ambient space (rank {rank} < dim {dim})")]
    NotFrameForH { rank: usize, dim: usize },

    #[error("sequence is not a Riesz basis: {context}")]
    NotRieszBasis { context: String },

    #[error("operator Q is numerically singular")]
    SingularQ,

    #[error("Q-norm admissibility violated: {which} = {lhs:.6e} exceeds {rhs:.6e}")]
    QNormViolation { which: String, lhs: f64, rhs: f64 },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("all vectors in the sequence are zero")]
    ZeroSequence,

    #[error("operator is not a bijection on the given subspace")]
    NotBijectiveOnV,

    #[error("hypothesis violated: {name} (lhs {lhs:.6e}, rhs {rhs:.6e})")]
    HypothesisViolated { name: String, lhs: f64, rhs: f64 },

    #[error("witness type does not match the requested reconstruction")]
    WitnessTypeMismatch,

    #[error("sequence is not an R-dual of type III of the given frame")]
    NotType3,

    #[error("bad lattice: {a} and {b} must both divide {l}")]
    BadLattice { l: usize, a: usize, b: usize },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("assertion failed: {0}")]
    AssertionFailure(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
