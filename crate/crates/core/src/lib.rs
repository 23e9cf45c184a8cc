//! Discrete calculus for modules over finite posets, in exact arithmetic.
//!
//! Posets are given by Hasse diagrams ([`Poset`]); modules assign matrices to covers
//! ([`PosetModule`]). The line poset ([`LineMap`]) carries gradients, and Kan
//! extensions back to the base give the left and right divergences.

pub mod calculus;
pub mod error;
pub mod field;
pub mod generators;
pub mod grothendieck;
pub mod hom;
pub mod io;
pub mod line;
pub mod matrix;
pub mod module;
pub mod pairings;
pub mod poset;
pub mod sparse;

pub use error::{Error, Result};
pub use field::{Fp, Scalar, Q};
pub use line::{line_components, line_connected_maximal_tree, line_poset, Comma, LineMap, TreeSubgraph};
pub use matrix::Matrix;
pub use module::{ModuleMap, PosetModule};
pub use poset::Poset;
