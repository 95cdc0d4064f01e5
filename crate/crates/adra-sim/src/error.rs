//! Crate-wide error type.
//!
//! Errors carry enough context to name the offending parameter, level pair,
//! or index; the CLI maps error categories onto distinct exit codes.

use std::fmt;

/// Input vector on a sense line: the stored bits of the two activated rows.
pub type VectorPair = (bool, bool);

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates a documented invariant. `what` names the field.
    InvalidParams { what: String },
    /// Two adjacent sense levels sit too close for reliable discrimination.
    InsufficientMargin {
        lower: VectorPair,
        upper: VectorPair,
        gap: f64,
        required: f64,
    },
    /// A sense triple that no input vector can produce.
    UnreachableTriple { or_bit: bool, and_bit: bool, b_bit: bool },
    /// Row, column, or word index outside the array bounds.
    OutOfRange { what: String },
    /// Activation mode and row operands do not agree.
    ModeMismatch { what: String },
    /// Configuration file could not be parsed. Message includes line info.
    ConfigParse { message: String },
    /// Configuration parsed but violates an invariant. `field` names it.
    ConfigInvariant { field: String, message: String },
    /// Calibration targets admit no physical (nonnegative) parameter set.
    InfeasibleCalibration { what: String },
    Io { message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

fn vec_pair(v: VectorPair) -> String {
    format!("({},{})", u8::from(v.0), u8::from(v.1))
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams { what } => write!(f, "invalid parameter: {what}"),
            Error::InsufficientMargin { lower, upper, gap, required } => write!(
                f,
                "insufficient sense margin between levels {} and {}: gap {:.4e} < required {:.4e}",
                vec_pair(*lower),
                vec_pair(*upper),
                gap,
                required
            ),
            Error::UnreachableTriple { or_bit, and_bit, b_bit } => write!(
                f,
                "unreachable sense triple (or={}, and={}, b={})",
                u8::from(*or_bit),
                u8::from(*and_bit),
                u8::from(*b_bit)
            ),
            Error::OutOfRange { what } => write!(f, "out of range: {what}"),
            Error::ModeMismatch { what } => write!(f, "activation mode mismatch: {what}"),
            Error::ConfigParse { message } => write!(f, "config parse error: {message}"),
            Error::ConfigInvariant { field, message } => {
                write!(f, "config invariant violated ({field}): {message}")
            }
            Error::InfeasibleCalibration { what } => write!(f, "infeasible calibration: {what}"),
            Error::Io { message } => write!(f, "io error: {message}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io { message: e.to_string() }
    }
}
