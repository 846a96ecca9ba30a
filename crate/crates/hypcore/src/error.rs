//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input polynomial has complex roots (or the multiplicity accounting
    /// could not certify `d` real roots).
    Hyperbolicity {
        distinct: usize,
        total_multiplicity: usize,
        degree: usize,
    },
    /// Root isolation could not meet the requested tolerance.
    Tolerance(String),
    /// The polynomial is numerically a pure power `Z^d` where a nonzero
    /// second coefficient is required.
    Degenerate(String),
    /// A grid operation does not fit: stencil too wide, interval outside the
    /// grid, or too few nodes.
    Grid(String),
    /// Invalid argument (non-finite input, dimension mismatch, out-of-range
    /// exponent, sign-indefinite data, ...).
    Domain(String),
    /// An internal consistency check failed; indicates a numerical bug, not
    /// bad input.
    Internal(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Hyperbolicity {
                distinct,
                total_multiplicity,
                degree,
            } => write!(
                f,
                "not hyperbolic: {distinct} distinct real roots, total multiplicity \
                 {total_multiplicity}, degree {degree}"
            ),
            Error::Tolerance(msg) => write!(f, "tolerance error: {msg}"),
            Error::Degenerate(msg) => write!(f, "degenerate polynomial: {msg}"),
            Error::Grid(msg) => write!(f, "grid error: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
