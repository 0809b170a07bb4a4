//! Executable checks for a group-theoretic proof of quadratic reciprocity.
//!
//! The crate is layered bottom-up:
//!
//! * [`abelian`]: finite abelian groups given as explicit products of cyclic
//!   groups, with two-torsion, 2-rank and the sum of all elements.
//! * [`quotient`]: the 2-rank of `G / {0, (n_1/2, ..., n_k/2)}` by closed form
//!   and by counting.
//! * [`residue`]: primality, modular powers, Legendre symbols, Wilson's
//!   theorem and Euler's criterion.
//! * [`pipeline`]: the transversal of `{(1,1), (-1,-1)}` in
//!   `F_p^x * F_q^x`, its product, and the per-pair verdict.
//! * [`report`] and [`suites`]: tabular reports and seeded randomized suites
//!   used by the `recipro` binary.

pub mod abelian;
pub mod budget;
mod error;
pub mod pipeline;
pub mod quotient;
pub mod report;
pub mod residue;
pub mod suites;

pub use budget::Budget;
pub use error::{Error, Result};
