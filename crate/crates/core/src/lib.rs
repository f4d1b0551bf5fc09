//! Artinian Gorenstein algebras with binomial Macaulay dual generators.
//!
//! Given a homogeneous dual generator `F`, the crate computes the graded
//! invariants of `A_F = R / Ann(F)` in exact rational arithmetic, decides the
//! weak and strong Lefschetz properties through both multiplication maps and
//! higher Hessians, and matches binomial generators against known sufficient
//! conditions for those properties.

pub mod apolarity;
pub mod error;
pub mod exactla;
pub mod families;
pub mod harness;
pub mod lefschetz;
pub mod polyring;

pub use error::{Error, Result};
pub use polyring::{DualPolynomial, Monomial, OperatorPolynomial};
