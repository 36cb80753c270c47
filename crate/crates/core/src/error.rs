// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument must be a positive integer, got 0")]
    Zero,
    #[error("{0} is not square-free")]
    NotSquarefree(i64),
    #[error("D = {0} does not define a quadratic field")]
    DegenerateD(i64),
    #[error("operation requires a {expected} quadratic field, got D = {d}")]
    WrongSignature { d: i64, expected: &'static str },
    #[error("real quadratic field Q(sqrt({0})) needs the norm of its fundamental unit")]
    MissingUnitNorm(i64),
    #[error("imaginary quadratic field Q(sqrt({0})) has no fundamental unit norm")]
    UnexpectedUnitNorm(i64),
    #[error("expected an integer result, got {num}/{den}")]
    NonIntegerResult { num: u64, den: u64 },
    #[error("element ({a} + {b}*sqrt({d}))/{q} is not a unit")]
    NotAUnit { a: String, b: String, q: u64, d: i64 },
    #[error("D = {0} is not of extended Richaud-Degert type")]
    NotExtendedRd(i64),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("f stays >= 1 on the whole scanned range [{lo:e}, {hi:e}]")]
    NoCrossing { lo: f64, hi: f64 },
    #[error("analytic class number {value} is not within 0.2 of an integer")]
    PrecisionFailure { value: f64 },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("identity violated for D = {d}: {what}")]
    IdentityViolation { d: i64, what: String },
    #[error("reference data file missing: {0}")]
    DataFileMissing(String),
    #[error("malformed data: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
