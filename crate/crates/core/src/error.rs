//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Operand dimensions do not fit the operation.
    #[error("shape error: {0}")]
    Shape(String),

    /// A matrix entry is NaN or infinite.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// An input violated a mathematical precondition (e.g. not Hermitian).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Caller supplied an argument outside its valid range.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Jacobi sweeps ran out before the off-diagonal mass fell below tolerance.
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    Convergence { sweeps: usize, residual: f64 },

    /// Strict sign extraction hit an entry too close to zero.
    #[error("degenerate sign at ({row}, {col}): value {value:e}")]
    DegenerateSign { row: usize, col: usize, value: f64 },

    /// A reconstructed entry is too close to zero to trust its sign.
    #[error(
        "ambiguous reconstructed sign at ({row}, {col}): value {value:e} within 10x residual {residual:e}"
    )]
    ReconstructionAmbiguity {
        row: usize,
        col: usize,
        value: f64,
        residual: f64,
    },

    /// Training loss became NaN or infinite.
    #[error("fit diverged at epoch {epoch}")]
    Divergence { epoch: usize },

    /// Malformed matrix file.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
}
