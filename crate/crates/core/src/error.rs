use alloc::string::String;
use alloc::vec::Vec;

use crate::arith::{Int, Rational};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid surface model: {0}")]
    InvalidModel(String),
    #[error("class lives in the {found} basis but the surface uses the {expected} basis")]
    ModelMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("operation requires {required}")]
    WrongModel { required: &'static str },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-integral result: {0}")]
    NonIntegral(String),
    #[error("divisibility: {numerator} is not divisible by {divisor}")]
    Divisibility { numerator: Int, divisor: Int },
    #[error("bound: -nu = {neg_nu} is below the required {required}")]
    Bound { neg_nu: Rational, required: Int },
    #[error("underdetermined linear system: rank {rank} < {unknowns}")]
    Underdetermined { rank: usize, unknowns: usize },
    #[error("inconsistent constraints: {conflicting:?}")]
    Inconsistent { conflicting: Vec<String> },
    #[error("check failed: {0}")]
    CheckFailed(String),
}
