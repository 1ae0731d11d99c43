//! Exact arithmetic: rationals, dense univariate polynomials over them, and
//! affine integration bounds.

mod bound;
mod polynomial;
mod rational;

pub use bound::AffineBound;
pub use polynomial::Polynomial;
pub use rational::{ArithOp, Rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}
