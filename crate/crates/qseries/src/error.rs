use std::fmt;

/// Errors raised by series operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesError {
    /// Inversion of a series with no nonzero term below its truncation.
    ZeroLeadingTerm,
    /// `log` of a series whose constant term is not 1, or `exp` of a series
    /// whose constant term is not 0 (or with negative exponents in either case).
    BadConstantTerm,
    /// A coefficient was requested at or beyond the truncation bound.
    BeyondTruncation,
    /// An operation requiring integer exponents was applied to a series with
    /// a finer grid.
    FractionalExponent,
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::ZeroLeadingTerm => {
                write!(f, "series is zero to truncation; no leading term to invert")
            }
            SeriesError::BadConstantTerm => {
                write!(f, "constant term does not satisfy the log/exp precondition")
            }
            SeriesError::BeyondTruncation => {
                write!(f, "coefficient requested at or beyond the truncation bound")
            }
            SeriesError::FractionalExponent => {
                write!(f, "operation requires integer exponents (grid 1)")
            }
        }
    }
}

impl std::error::Error for SeriesError {}
