//! Exact and Monte Carlo evaluation of the broken stick polygon probability
//! `1 - (n+1)/2^n`.

pub mod arith;
pub mod cli;
pub mod exact;
pub mod mc;
