use core::fmt;

/// Argument errors reported by kernel and combination operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// Two vectors with different dimensions were passed to a binary operation.
    DimMismatch { left: usize, right: usize },
    /// An n-gram window length of zero was requested.
    ZeroNgramLen,
    /// An operation requiring at least one vector received an empty list.
    EmptyInput,
    /// Score and item lists passed to ranking have different lengths.
    LengthMismatch { scores: usize, items: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::ZeroNgramLen => write!(f, "n-gram window length must be at least 1"),
            Error::EmptyInput => write!(f, "expected at least one vector"),
            Error::LengthMismatch { scores, items } => {
                write!(f, "{scores} scores for {items} items")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
