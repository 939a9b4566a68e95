use thiserror::Error;

/// Errors raised by the verifier.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid tolerance profile: {0}")]
    Tolerance(String),

    #[error("structure table fails antisymmetry at (i, j, k) = ({i}, {j}, {k})")]
    Antisymmetry { i: usize, j: usize, k: usize },

    #[error("structure table fails Jacobi identity at (i, j, k, l) = ({i}, {j}, {k}, {l})")]
    Jacobi { i: usize, j: usize, k: usize, l: usize },

    #[error("matrix realization disagrees with structure constants at ({i}, {j})")]
    Realization { i: usize, j: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("not a subalgebra: bracket of basis vectors {0} and {1} leaves the span")]
    NotSubalgebra(usize, usize),

    #[error("subspace is not invariant under the acting algebra (acting vector {acting}, space vector {vector})")]
    NotInvariant { acting: usize, vector: usize },

    #[error("degenerate form: {0}")]
    DegenerateForm(String),

    #[error("spectrum is not rational; eigenspaces cannot be produced exactly")]
    NonRationalSpectrum,

    #[error("metric precondition failed: {0}")]
    Precondition(String),

    #[error("replay failed: {0}")]
    Replay(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
