//! Drinfeld-Stuhler modules over F_q(T): skew polynomial matrices, cyclic algebras,
//! module verification, finite-characteristic structure and Galois descent.

pub mod algebra;
pub mod descent;
pub mod base;
pub mod error;
pub mod finite_char;
pub mod fixtures;
pub mod module;
pub mod parse;
pub mod report;
pub mod skew;
pub mod torsion;

pub use error::{Error, Result};
