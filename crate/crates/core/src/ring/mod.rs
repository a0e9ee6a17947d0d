//! Exact coefficient ring.
//!
//! Elements are finite sums of `rational * symbol monomial * t^m * x^n *
//! exp(arg)`, where `arg` is a linear combination of `t` and `x^2` with
//! monomial coefficients. The ring is closed under multiplication, `d/dt`,
//! `d/dx` and monomial substitution of symbols.

mod element;
mod exparg;
mod symbol;

use num_bigint::BigInt;
use thiserror::Error;

pub use element::{NumericEnv, RingElement, RingTerm, TermKey, Var};
pub use exparg::{ExpArg, ExpBase};
pub use symbol::{is_identifier, Monomial, ScaledMonomial, Symbol, SymbolTable, RESERVED_NAMES};

pub(crate) use symbol::rational_pow;

pub type Rational = num_rational::BigRational;

/// Shorthand for `n/d` as an arbitrary precision rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("`{0}` is reserved and cannot be used as a symbol")]
    ReservedSymbol(String),
    #[error("`{0}` is not a valid symbol name")]
    InvalidSymbol(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("exponent `{0}` is outside the span of t and x^2 with monomial coefficients")]
    ExponentOutOfSpan(String),
    #[error("{0} is not a single monomial")]
    NotMonomial(String),
}
