//! Numerical laboratory for hyperbits: real unit-ball states measured by unit
//! vectors, with expectation equal to the scalar product.
//!
//! The crate builds the objects explicitly and checks the main statements about
//! them by exact computation:
//!
//! - [`protocols`]: one hyperbit is interchangeable with shared entanglement plus
//!   one classical bit, via the vector/operator correspondence in [`tsirelson`]
//!   and the gamma matrices in [`clifford`].
//! - [`queries`]: the bias identity for complete sets of pairwise unbiased queries.
//! - [`infocausality`]: information causality for pairwise independent bits.
//!
//! [`qsim`] is the dense complex-matrix kernel underneath, and [`cli`] drives
//! seeded, reproducible report generation for the `hyperbits` binary.

pub mod cli;
pub mod clifford;
pub mod error;
pub mod hyperball;
pub mod infocausality;
pub mod linalg;
pub mod protocols;
pub mod qsim;
pub mod queries;
pub mod random;
pub mod tolerance;
pub mod tsirelson;

pub use error::{Error, Result};
