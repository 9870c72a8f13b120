use thiserror::Error;

/// Broad failure class, used to map errors onto process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input is certified (or verified within tolerance) not to be a compound.
    NotDecomposable,
    /// A numerical stage failed; the input may still be decomposable.
    Numerical,
    /// Bad arguments, shapes, or I/O.
    Usage,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("rank-deficient system: numerical rank {rank} < {cols} columns")]
    RankDeficientSystem { rank: usize, cols: usize },

    #[error("not compound-decomposable: {0}")]
    NotCompoundDecomposable(String),

    #[error("preprocessing failed after {attempts} draws (best relative gap {best_gap:e})")]
    PreprocessingFailed { attempts: usize, best_gap: f64 },

    #[error("wedge decomposition failed: {0}")]
    DecompositionFailed(String),

    #[error("singular-value ordering failed: {0}")]
    OrderingFailed(String),

    #[error("alignment failed: {0}")]
    AlignmentFailed(String),

    #[error("sign adjustment failed: the parity system has no solution")]
    SignFailed,

    #[error("inconsistent compound singular values (log residual {residual:e})")]
    InconsistentCompoundValues { residual: f64 },

    #[error("singular input: {0}")]
    SingularInput(String),

    #[error("verification failed: relative residual {residual:e} exceeds {tolerance:e}")]
    VerificationFailed { residual: f64, tolerance: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::DegenerateInput(_) => "degenerate-input",
            Error::RankDeficientSystem { .. } => "rank-deficient-system",
            Error::NotCompoundDecomposable(_) => "not-compound-decomposable",
            Error::PreprocessingFailed { .. } => "preprocessing-failed",
            Error::DecompositionFailed(_) => "decomposition-failed",
            Error::OrderingFailed(_) => "ordering-failed",
            Error::AlignmentFailed(_) => "alignment-failed",
            Error::SignFailed => "sign-failed",
            Error::InconsistentCompoundValues { .. } => "inconsistent-compound-values",
            Error::SingularInput(_) => "singular-input",
            Error::VerificationFailed { .. } => "verification-failed",
            Error::Unsupported(_) => "unsupported",
            Error::Io(_) => "io",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NotCompoundDecomposable(_)
            | Error::VerificationFailed { .. }
            | Error::InconsistentCompoundValues { .. } => ErrorClass::NotDecomposable,
            Error::PreprocessingFailed { .. }
            | Error::DecompositionFailed(_)
            | Error::OrderingFailed(_)
            | Error::AlignmentFailed(_)
            | Error::SignFailed
            | Error::RankDeficientSystem { .. }
            | Error::SingularInput(_)
            | Error::DegenerateInput(_) => ErrorClass::Numerical,
            Error::InvalidArgument(_) | Error::Unsupported(_) | Error::Io(_) => ErrorClass::Usage,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! ensure_arg {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err($crate::Error::InvalidArgument(format!($($fmt)+)));
        }
    };
}
pub(crate) use ensure_arg;
