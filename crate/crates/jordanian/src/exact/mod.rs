//! Exact rational arithmetic and dense exact linear algebra.

mod qmat;
mod rat;

pub use qmat::{CharPoly, QMat};
pub use rat::Rat;
