//! Exact computations with Kaplansky's superalgebra, the superform algebra and
//! Kac's ten-dimensional Jordan superalgebra: structure tables, automorphisms,
//! group gradings and twisted forms over quadratic extensions.

pub mod algebra;
pub mod linalg;
pub mod scalars;
pub mod catalog;
pub mod morphisms;
pub mod gradings;
pub mod group;
pub mod descent;
pub mod json;
