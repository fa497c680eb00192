use thiserror::Error;

/// Errors raised by model construction, analysis and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate spectrum: eigenvalues {0} and {1} collide")]
    DegenerateSpectrum(f64, f64),

    #[error("eigenvalue {0} does not match any analytic pair value")]
    UnmatchedEigenvalue(f64),

    #[error("forcing-square pattern violated for pair {pair}: {detail}")]
    PatternViolation { pair: usize, detail: String },

    #[error("not a permutation: {0}")]
    NotPermutation(String),

    #[error("complement of kept modes is not invariant (violation {0:e})")]
    NotInvariant(f64),

    #[error("point is not an equilibrium (residual {0:e})")]
    NotEquilibrium(f64),

    #[error("exact resonance between driven and driver modes")]
    Resonance,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
