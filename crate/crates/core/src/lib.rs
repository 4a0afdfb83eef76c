//! Computational tools for the Diophantine equation `x^4 - q^4 = p * y^r`.
//!
//! * [`arith`]: exact integer primitives (gcd, modular powers, primality,
//!   factorization, multiplicative orders, primitive roots mod prime powers).
//! * [`cyclotomic`]: splitting of rational primes in cyclotomic rings and
//!   Kummer extensions via the power residue character.
//! * [`conditions`]: the hypothesis set on `(p, q, r)` and enumeration of
//!   qualifying triples.
//! * [`diophantine`]: verification, exhaustive search and case tracing of
//!   solutions.

pub mod arith;
pub mod conditions;
pub mod cyclotomic;
pub mod diophantine;
pub mod error;
pub mod serde_big;

pub use error::{Error, Result};
