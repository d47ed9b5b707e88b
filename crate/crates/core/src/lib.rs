//! Exact computation of ramification invariants: Swan conductors of
//! Artin–Schreier characters, slope decompositions, Herbrand functions, and
//! conductor divisors of explicit sheaf families checked against curve
//! restrictions.

pub mod arith;
pub mod aschar;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod herbrand;
pub mod slopes;

pub use error::{Error, Result};
