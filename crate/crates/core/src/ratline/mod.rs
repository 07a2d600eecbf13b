//! Rational functions in the coordinate t over K, Laurent expansions,
//! partial fractions and residues.

pub mod forms;
pub mod pf;
pub mod ratfn;
pub mod series;
pub mod upoly;
