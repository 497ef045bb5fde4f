//! Differential graded algebras over a presented ring, semi-free DG modules, Hom complexes,
//! cohomology and chain maps.

mod algebra;
mod hom;
mod module;

pub use algebra::*;
pub use hom::*;
pub use module::*;
