use core::fmt;

/// Errors raised by the library.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Operand dimensions do not agree.
    DimensionMismatch { expected: usize, found: usize },
    /// The simplex could not keep its pivots or certificates within tolerance.
    NumericalBreakdown(&'static str),
    /// An index value does not belong to the instance's index set.
    IndexOutOfRange,
    /// Grid resolution below 2 or countable cap below 1.
    InvalidResolution,
    /// The family kind does not apply to the index set (prefixes need a countable set).
    SpecSetMismatch,
    /// The family produced no subset.
    EmptyFamily,
    /// No built-in instance has that name.
    UnknownName,
    /// A reducibility certificate needs a finite optimal value.
    BoundednessRequired,
    /// Prefix traces need a countable index factor.
    NotCountable,
    /// Limit estimates need at least five prefix values.
    TraceTooShort,
    /// Structural problem with an instance, subset or family.
    Invalid(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NumericalBreakdown(why) => write!(f, "numerical breakdown: {why}"),
            Error::IndexOutOfRange => f.write_str("index value outside the index set"),
            Error::InvalidResolution => {
                f.write_str("grid resolution must be at least 2 and countable cap at least 1")
            }
            Error::SpecSetMismatch => f.write_str("prefix families need a countable index set"),
            Error::EmptyFamily => f.write_str("family produced no subsets"),
            Error::UnknownName => f.write_str("unknown built-in instance"),
            Error::BoundednessRequired => f.write_str("alpha must be finite"),
            Error::NotCountable => f.write_str("index set has no countable factor"),
            Error::TraceTooShort => f.write_str("prefix trace needs at least 5 terms"),
            Error::Invalid(why) => f.write_str(why),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
