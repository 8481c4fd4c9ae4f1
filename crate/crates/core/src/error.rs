//! Error type shared across the crate.

use std::fmt;

/// Everything that can go wrong while building presentations or running
/// length computations. Variants carry enough context to be reported to a
/// config author verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two objects that must live over the same ambient variables disagree.
    MismatchedVars { left: usize, right: usize },
    /// Two objects that must share a characteristic disagree.
    CharacteristicMismatch { left: u64, right: u64 },
    /// A scalar was built (or combined) with a modulus that is not prime.
    NotPrime(u64),
    /// Scalars from different prime fields were combined.
    ModulusMismatch { left: u64, right: u64 },
    /// A colength was requested for an ideal with an infinite staircase.
    NotArtinian,
    /// An exponent or index left the supported range.
    Overflow(String),
    /// A structural precondition on a presentation failed.
    InvalidPresentation(String),
    /// The requested fiber-product surjection is not of the supported
    /// variable-killing/variable-matching shape.
    UnsupportedSurjection(String),
    /// An ideal handed to a construction does not satisfy its preconditions.
    UnsupportedIdeal(String),
    /// A module description with no summands (or another degenerate shape).
    InvalidModule(String),
    /// A truncated algebra is too small to decide the requested power.
    TruncationTooSmall { needed: u32, have: u32 },
    /// Text that failed to parse; line/column are 1-based when known.
    Parse { line: usize, col: usize, msg: String },
    /// A check was asked to run without one of its required inputs.
    MissingInput(String),
    /// A query parameter is outside its domain (s <= 0, empty e-range, ...).
    InvalidQuery(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MismatchedVars { left, right } => {
                write!(f, "ambient variable counts differ: {left} vs {right}")
            }
            Error::CharacteristicMismatch { left, right } => {
                write!(f, "characteristics differ: {left} vs {right}")
            }
            Error::NotPrime(p) => write!(f, "modulus {p} is not prime"),
            Error::ModulusMismatch { left, right } => {
                write!(f, "scalar moduli differ: {left} vs {right}")
            }
            Error::NotArtinian => {
                write!(f, "ideal is not artinian and no degree cap was given")
            }
            Error::Overflow(what) => write!(f, "arithmetic overflow: {what}"),
            Error::InvalidPresentation(msg) => write!(f, "invalid presentation: {msg}"),
            Error::UnsupportedSurjection(msg) => write!(f, "unsupported surjection: {msg}"),
            Error::UnsupportedIdeal(msg) => write!(f, "unsupported ideal: {msg}"),
            Error::InvalidModule(msg) => write!(f, "invalid module: {msg}"),
            Error::TruncationTooSmall { needed, have } => {
                write!(f, "truncation order {have} too small, need more than {needed}")
            }
            Error::Parse { line, col, msg } => {
                write!(f, "parse error at line {line}, column {col}: {msg}")
            }
            Error::MissingInput(msg) => write!(f, "missing input: {msg}"),
            Error::InvalidQuery(msg) => write!(f, "invalid query: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl Error {
    /// Parse error without position information.
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse { line: 0, col: 0, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
