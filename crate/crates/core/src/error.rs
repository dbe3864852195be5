use std::fmt;

/// Errors shared across the exact-computation modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreError {
    /// An operation that requires a nonzero polynomial received the zero
    /// polynomial.
    ZeroPolynomial,
    /// The weighted degree of an input does not match the expected grade.
    DegreeMismatch { expected: u32, found: u32 },
    /// An operation defined only for even weighted degree received an odd
    /// degree; premultiply by `x` to land in the even case.
    OddDegree(u32),
    /// A 2x2 matrix with zero determinant was used where an invertible
    /// element is required.
    SingularMatrix,
    /// The Groebner engine ran out of budget before certifying an answer.
    /// Never downgraded to a guess.
    GroebnerBudget { pairs_processed: usize },
    /// Structurally invalid input (empty support, shape mismatch, ...).
    InvalidInput(String),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::ZeroPolynomial => write!(f, "zero input"),
            CoreError::DegreeMismatch { expected, found } => {
                write!(f, "weighted degree mismatch: expected {expected}, found {found}")
            }
            CoreError::OddDegree(d) => {
                write!(f, "weighted degree {d} is odd; premultiply by x to reach even degree")
            }
            CoreError::SingularMatrix => write!(f, "singular 2x2 matrix"),
            CoreError::GroebnerBudget { pairs_processed } => {
                write!(f, "undecided: budget (stopped after {pairs_processed} S-pair reductions)")
            }
            CoreError::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
        }
    }
}

impl std::error::Error for CoreError {}
