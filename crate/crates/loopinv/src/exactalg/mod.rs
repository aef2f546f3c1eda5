//! Exact polynomial arithmetic over arbitrary-precision rationals.
//!
//! Everything downstream (Groebner bases, recurrence solving, invariant
//! ideals) is built on the types in this module. Coefficients are
//! `num_rational::BigRational`, which maintains the invariants we need
//! (lowest terms, positive denominator) by construction. Polynomials are
//! stored as canonical term maps; monomial orders are separate values so
//! the same polynomial can be inspected under lex, degrevlex, or a block
//! elimination order without re-encoding.

mod monomial;
mod order;
mod parse;
mod poly;

pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use parse::{parse_polynomial, PolyParseError};
pub use poly::{poly_reduce, AlignError, Polynomial, Vars};

pub type Rational = num_rational::BigRational;
pub type Int = num_bigint::BigInt;

/// Integer as a rational, for building constants without ceremony.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(Int::from(n))
}

/// `n/d` in lowest terms. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(Int::from(n), Int::from(d))
}
