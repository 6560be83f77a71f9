//! Finite fields, polynomials over them, rational functions and the constant-field tower.

pub mod amat;
pub mod factor;
pub(crate) mod fp_poly;
pub mod gf;
pub mod linalg;
pub mod poly;
pub mod ratfn;
pub mod tower;

pub use gf::{Embedding, Fe, Gf};
pub use poly::Poly;
pub use ratfn::RatFn;
pub use tower::{Tower, TowerConfig};
