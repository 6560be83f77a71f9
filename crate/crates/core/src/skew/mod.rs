//! Skew polynomial rings `L[τ]` and matrices over them.

pub mod coeff;
pub mod matrix;
pub mod points;
pub mod poly;
pub mod solve;

pub use coeff::{CoeffField, FiniteCoeff, RatCoeff};
pub use matrix::{DiagonalForm, SkewMat, Triangular};
pub use poly::SkewPoly;
