//! Exact multivariate Laurent polynomials over the Gaussian rationals.

mod context;
mod gauss;
mod json;
mod parse;
mod poly;
mod rat;

pub use context::{Var, VarContext, MAX_VARS};
pub use gauss::GaussRational;
pub use json::{ContextJson, PolyJson, TermJson};
pub use poly::{exponent, pack, unpack, Mono, MultiLaurent, ONE_KEY};
pub use rat::{ParseRatError, Rat};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LaurentError {
    #[error("context mismatch: {0} vs {1}")]
    ContextMismatch(String, String),
    #[error("invalid context: {0}")]
    Context(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` has no assignment")]
    UnassignedVariable(String),
    #[error("negative power of a non-monomial")]
    NonMonomialNegativePower,
    #[error("zero assigned to `{0}`, which occurs with a negative exponent")]
    ZeroAtNegativeExponent(String),
    #[error("division by zero")]
    DivisionByZero,
}
