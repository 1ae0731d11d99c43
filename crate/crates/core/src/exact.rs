//! Exact evaluation of the broken stick probabilities.
//!
//! With break points sorted as `x_1 <= ... <= x_n`, the pieces form an
//! `(n+1)`-gon iff `x_1 < 1/2`, every gap `x_i - x_{i-1} < 1/2` and
//! `x_n > 1/2`. Conditioning on exactly `k` points below `1/2` (which forces
//! `1 <= k < n`) turns that region into a nested integral with affine limits:
//!
//! ```text
//! x_1            in (0,        1/2)
//! x_i, 2..=k     in (x_{i-1},  1/2)
//! x_{k+1}        in (1/2,      1/2 + x_k)
//! x_i, k+2..=n   in (x_{i-1},  1)
//! ```
//!
//! [`symbolic_ink`] integrates that region inside-out with exact polynomial
//! arithmetic. [`closed_form_ink`] is the binomial closed form
//! `(C(n,k) - 1) / (2^n n!)`; the two paths share no code beyond rationals.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{AffineBound, Polynomial, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("invalid n = {n}: n ≥ 2 is required")]
    NTooSmall { n: u32 },
    #[error("invalid k = {k} for n = {n}: k must satisfy 1 ≤ k < n")]
    KOutOfRange { n: u32, k: u32 },
    #[error("invalid simplex dimension m = {m}: m ≥ 2 is required")]
    SimplexDimension { m: u32 },
}

fn check_n(n: u32) -> Result<(), ExactError> {
    if n < 2 {
        return Err(ExactError::NTooSmall { n });
    }
    Ok(())
}

fn check_nk(n: u32, k: u32) -> Result<(), ExactError> {
    check_n(n)?;
    if k < 1 || k >= n {
        return Err(ExactError::KOutOfRange { n, k });
    }
    Ok(())
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    // each prefix product is itself a binomial coefficient, so the division is exact
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: u32) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `y1^(alpha+m-1) / prod_{i=1}^{m-1} (alpha+i)`: the integral of `y_m^alpha`
/// over the chain `0 <= y_m <= ... <= y_2 <= y1`.
pub fn simplex_monomial_integral(alpha: u32, m: u32, y1: &Rational) -> Result<Rational, ExactError> {
    if m < 2 {
        return Err(ExactError::SimplexDimension { m });
    }
    let denom = (1..m).fold(BigUint::one(), |acc, i| acc * (alpha + i));
    Ok(&y1.pow(alpha + m - 1) / &Rational::from(denom))
}

/// One variable of the nested integral and its limits in the next-outer
/// variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralLayer {
    /// 1-based; layer `i` integrates `x_i`.
    pub variable: u32,
    pub lower: AffineBound,
    pub upper: AffineBound,
}

/// The `n` layers of the region with exactly `k` points below one half,
/// outermost (`x_1`) first.
pub fn build_integral_layers(n: u32, k: u32) -> Result<Vec<IntegralLayer>, ExactError> {
    check_nk(n, k)?;
    let zero = || AffineBound::constant(Rational::zero());
    let half = || AffineBound::constant(Rational::half());
    let one = || AffineBound::constant(Rational::one());

    let layers = (1..=n)
        .map(|i| {
            let (lower, upper) = if i == 1 {
                (zero(), half())
            } else if i <= k {
                (AffineBound::outer(), half())
            } else if i == k + 1 {
                (half(), AffineBound::shifted_outer(Rational::half()))
            } else {
                (AffineBound::outer(), one())
            };
            IntegralLayer {
                variable: i,
                lower,
                upper,
            }
        })
        .collect();
    Ok(layers)
}

/// Integrates the constant 1 through `layers`, innermost first.
///
/// Returns the polynomial left in the variable outside the outermost layer;
/// if the outermost limits are constant this is a constant.
pub fn integrate_layers(layers: &[IntegralLayer]) -> Polynomial {
    layers.iter().rev().fold(Polynomial::one(), |integrand, layer| {
        integrand.definite_integral(&layer.lower, &layer.upper)
    })
}

/// The joint probability (for sorted points) of the polygon condition and
/// exactly `k` points below one half, by exact iterated integration.
pub fn symbolic_ink(n: u32, k: u32) -> Result<Rational, ExactError> {
    let layers = build_integral_layers(n, k)?;
    let value = integrate_layers(&layers)
        .as_constant()
        .expect("outermost limits are constant");
    Ok(value)
}

/// `(C(n,k) - 1) / (2^n n!)`.
pub fn closed_form_ink(n: u32, k: u32) -> Result<Rational, ExactError> {
    check_nk(n, k)?;
    let numer = Rational::from(binomial(n, k)) - Rational::one();
    Ok(numer * Rational::inverse_power_of_two(n) / Rational::from(factorial(n)))
}

/// Probability of the polygon condition for sorted points:
/// `(2^n - (n+1)) / (2^n n!)`.
pub fn ordered_probability(n: u32) -> Result<Rational, ExactError> {
    check_n(n)?;
    let two_n = Rational::from(BigUint::one() << n as usize);
    let numer = &two_n - &Rational::from(i64::from(n) + 1);
    Ok(numer / (two_n * Rational::from(factorial(n))))
}

/// The broken stick answer `1 - (n+1)/2^n`.
pub fn polygon_probability(n: u32) -> Result<Rational, ExactError> {
    check_n(n)?;
    Ok(Rational::one() - Rational::from(i64::from(n) + 1) * Rational::inverse_power_of_two(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KRow {
    pub k: u32,
    pub symbolic: Rational,
    pub closed_form: Rational,
}

/// Both evaluations of every `I_{n,k}` plus the aggregated probabilities.
///
/// `ordered_probability` is the sum of the symbolic column and
/// `final_probability` is `n!` times that, so neither relies on the closed
/// forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactTable {
    pub n: u32,
    pub per_k: Vec<KRow>,
    pub ordered_probability: Rational,
    pub final_probability: Rational,
}

impl ExactTable {
    pub fn symbolic_equals_closed(&self) -> bool {
        self.per_k.iter().all(|row| row.symbolic == row.closed_form)
    }

    /// `n! * sum_k I_{n,k} == 1 - (n+1)/2^n`, checked against the formula.
    pub fn sum_rule_holds(&self) -> bool {
        polygon_probability(self.n).is_ok_and(|p| p == self.final_probability)
    }
}

pub fn exact_table(n: u32) -> Result<ExactTable, ExactError> {
    check_n(n)?;
    let per_k = (1..n)
        .map(|k| {
            Ok(KRow {
                k,
                symbolic: symbolic_ink(n, k)?,
                closed_form: closed_form_ink(n, k)?,
            })
        })
        .collect::<Result<Vec<_>, ExactError>>()?;
    let ordered_probability: Rational = per_k.iter().map(|row| &row.symbolic).sum();
    let final_probability = &ordered_probability * &Rational::from(factorial(n));
    Ok(ExactTable {
        n,
        per_k,
        ordered_probability,
        final_probability,
    })
}
