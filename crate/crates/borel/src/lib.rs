//! Borel nilradicals of simple Lie algebras and their solvable extensions.
//!
//! The crate constructs the nilradical of the Borel subalgebra of any simple
//! Lie algebra (classical or exceptional) from its root system, computes the
//! full derivation algebra exactly, and builds and canonicalizes solvable
//! extensions of the nilradical. All arithmetic is exact: integer structure
//! constants and arbitrary-precision rationals, no floating point anywhere.

pub mod derivation;
pub mod extension;
pub mod linalg;
pub mod nilradical;
pub mod roots;

pub use linalg::{Mat, Rat};

pub use nilradical::{build_nilradical, NilpotentAlgebra};

pub use roots::{Family, Root, RootSystem};
