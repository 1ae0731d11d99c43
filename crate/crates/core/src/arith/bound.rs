use std::fmt;

use super::{Polynomial, Rational};

/// An integration limit `constant + slope * x` in the next-outer variable `x`.
///
/// A zero slope is a constant bound. Any rational slope is accepted.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineBound {
    pub constant: Rational,
    pub slope: Rational,
}

impl AffineBound {
    pub fn new(constant: Rational, slope: Rational) -> Self {
        AffineBound { constant, slope }
    }

    pub fn constant(value: Rational) -> Self {
        AffineBound::new(value, Rational::zero())
    }

    /// The outer variable itself, `0 + 1*x`.
    pub fn outer() -> Self {
        AffineBound::new(Rational::zero(), Rational::one())
    }

    /// `offset + x`.
    pub fn shifted_outer(offset: Rational) -> Self {
        AffineBound::new(offset, Rational::one())
    }

    pub fn is_constant(&self) -> bool {
        self.slope.is_zero()
    }

    pub fn as_polynomial(&self) -> Polynomial {
        Polynomial::new(vec![self.constant.clone(), self.slope.clone()])
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        &self.constant + &(&self.slope * x)
    }
}

/// Renders with `x` as the outer variable, e.g. `1/2 + x`, `x`, `1/2`.
impl fmt::Display for AffineBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            return write!(f, "{}", self.constant);
        }
        let term = if self.slope == 1 {
            "x".to_string()
        } else {
            format!("({})*x", self.slope)
        };
        if self.constant.is_zero() {
            write!(f, "{term}")
        } else {
            write!(f, "{} + {term}", self.constant)
        }
    }
}
