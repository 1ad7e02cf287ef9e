//! Exact computational toolkit for the algebra R = k⟨x,y⟩ / (xy − yx − y²):
//! normal forms and automorphisms, finite-dimensional representation
//! families, image-algebra structure (radical, idempotents, quiver), module
//! decomposition and canonical forms — all over exact rational arithmetic.

pub mod checks;
pub mod error;
pub mod exact;
pub mod freealg;
pub mod imagealg;
pub mod repspace;
pub mod sampling;
pub mod structure;

pub use error::{Error, Result};
