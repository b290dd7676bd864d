use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coin entry names, used to point at the offending entry in errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry {
    A,
    B,
    C,
    D,
}

impl std::fmt::Display for Entry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Entry::A => "a",
            Entry::B => "b",
            Entry::C => "c",
            Entry::D => "d",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coin is not unitary: max |(U^H U - I)_ij| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("phase factor must have unit modulus, got |omega| = {modulus}")]
    BadPhase { modulus: f64 },

    #[error("eigenvalue must have unit modulus, got |lambda| = {modulus}")]
    BadEigenvalue { modulus: f64 },

    #[error("coin entry {entry} at x = {position} is zero but is used as a divisor")]
    DivisionByZeroEntry { entry: Entry, position: i64 },

    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    #[error("coin field is ambiguous at x = {0}: defect table has a gap and the tails differ")]
    DefectGap(i64),

    #[error("invalid window [{min}, {max}]: {reason}")]
    InvalidWindow { min: i64, max: i64, reason: String },

    #[error("invalid defect region: {0}")]
    InvalidRegion(String),

    #[error("truncated window exhausted: {0}")]
    WindowExhausted(String),

    #[error("insufficient window for classification: {0}")]
    InsufficientWindow(String),
}
