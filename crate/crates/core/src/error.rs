use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Variants other than [`Error::Internal`] describe bad input. `Internal`
/// means a runtime self-check failed (an identity that must hold exactly
/// did not), which always indicates a bug.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("nilpotency violated: eps^{n} != 0")]
    NilpotencyViolated { n: usize },
    #[error("nilpotency degree must be at least 2, got {0}")]
    BadDegree(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("nilpotency degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("matrix does not commute with the differentials")]
    NotCommuting,
    #[error("subspace W is not contained in V")]
    NotContained,
    #[error("{what} = {value} out of range {lo}..={hi}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        lo: usize,
        hi: usize,
    },
    #[error("object is not of augmented shape T(X)")]
    NotAugmented,
    #[error("endomorphism is not idempotent")]
    NotIdempotent,
    #[error("pair is not a short exact sequence: {0}")]
    NotExact(String),
    #[error("morphism is not a quasi-isomorphism")]
    NotQuasiIso,
    #[error("linearly dependent basis")]
    Dependent,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures of the library's own exact self-checks.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
