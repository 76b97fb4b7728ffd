use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime")]
    NotPrime(u32),
    #[error("residue {value} at index {index} is not below modulus {modulus}")]
    ResidueOutOfRange { index: usize, value: u32, modulus: u32 },
    #[error("sequence must have period at least 1")]
    EmptySequence,
    #[error("period mismatch: {left} vs {right}")]
    PeriodMismatch { left: usize, right: usize },
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("invalid LFSR: {0}")]
    InvalidLfsr(String),
    #[error("LFSR initial state is all-zero")]
    ZeroState,
    #[error("polynomial is not primitive: achieved period {achieved}, expected {expected}")]
    NotPrimitive { achieved: usize, expected: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shift sequence entry {index} is infinity")]
    InfiniteShift { index: usize },
    #[error("shift {value} at index {index} is outside [0, {len})")]
    ShiftOutOfRange { index: usize, value: usize, len: usize },
    #[error("{what} = {value} is out of range [{lo}, {hi})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        lo: usize,
        hi: usize,
    },
    #[error("column {column} is neither zero nor a phase shift of the base sequence")]
    NotInterleaved { column: usize },
    #[error("signal set is empty")]
    EmptySet,
    #[error("exhaustive search for v = {v} exceeds the budget (v <= {max_v}); use force to override")]
    BudgetExceeded { v: usize, max_v: usize },
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(what: &'static str, value: usize, lo: usize, hi: usize) -> Result<()> {
    if value < lo || value >= hi {
        Err(Error::OutOfRange { what, value, lo, hi })
    } else {
        Ok(())
    }
}
