//! Finite median algebras as median-closed sets of bit vectors: medians,
//! intervals, hulls, squares and cubes, rank, halfspace systems and their
//! cubulations, and weighted wall metrics with exhaustions.

pub mod bits;
pub mod error;
pub mod median;
pub mod models;
pub mod wallspace;
pub mod metric;

pub use bits::{Bits, VertexId, VertexSet};
pub use error::{Error, Result};
pub use median::MedianModel;
