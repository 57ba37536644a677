use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is singular (|det| = {0:e})")]
    Singular(f64),
    #[error("ambiguous parabolic/identity classification (|tr^2 - 4| = {0:e})")]
    AmbiguousClass(f64),
    #[error("the identity fixes every boundary point")]
    IdentityHasAllFixed,
    #[error("isometry is not real")]
    NotReal,
    #[error("degenerate cross-ratio frame")]
    DegenerateFrame,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("non-generic flag configuration at index {0:?}")]
    NonGenericConfiguration([usize; 4]),
    #[error("generator index {index} out of range for rank {rank}")]
    RankMismatch { index: usize, rank: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("certificate not found: {0}")]
    NotFound(String),
    #[error("ping-pong discs overlap (margin {margin:e})")]
    DiscsOverlap { margin: f64 },
    #[error("budget exceeded: best achieved {best:e}")]
    BudgetExceeded { best: f64 },
    #[error("empty family")]
    EmptyFamily,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
