use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input that the caller can fix.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The requested degree needs simplices above the construction cap.
    #[error("degree {degree} not computed: complex is capped at dimension {max_dim}")]
    NotComputed { degree: usize, max_dim: usize },

    #[error("vertex map is not simplicial: image of {simplex:?} is not a simplex of the target{}", if *.in_sub { " subcomplex" } else { "" })]
    NotSimplicial { simplex: Vec<u32>, in_sub: bool },

    #[error("modulus not found at available scales")]
    ModulusNotFound,

    #[error("ladder too sparse: no rung has its relational square inside the target entourage")]
    LadderTooSparse,

    #[error("hypothesis not satisfied at available scales (witness point {witness})")]
    HypothesisNotSatisfied { witness: usize },

    #[error("coefficient does not fit in 64 bits")]
    Overflow,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, message: msg.into() }
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
