//! Restriction species and directed restriction species as finite, truncated
//! decomposition spaces.
//!
//! The crate builds the simplicial groupoid of layered structures for a
//! species, checks the simplicial and decomposition-space axioms on it, and
//! computes the resulting incidence bialgebra over exact rationals.

pub mod coalg;
pub mod decomp;
pub mod exec;
pub mod groupoid;
pub mod poset;
pub mod simplex;
pub mod species;

pub use exec::Exec;
