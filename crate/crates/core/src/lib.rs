//! Exact computation of the Gauß–Manin determinant connection of an
//! admissible connection on the projective line over a function field.

pub mod cli;
pub mod cohomology;
pub mod connection;
pub mod error;
pub mod fixtures;
pub mod funcfield;
pub mod gaussmanin;
pub mod linalg;
pub mod localformula;
pub mod oracle;
pub mod ratline;
pub mod scalar;

pub use error::{Error, Result};
pub use funcfield::{FieldElem, OneFormK, Poly, TwoFormK};
pub use scalar::Field;

/// Arbitrary precision rationals.
pub type Q = num_rational::BigRational;
