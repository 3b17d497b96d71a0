//! Halfspace systems, ultrafilters, the dual cube complex and local
//! cubulation checks.

mod complex;
mod halfspace;

pub use complex::{check_local_cubulation, Cube, CubeComplexSkeleton, Link, LocalCubulationReport};
pub use halfspace::{sageev_cubulation, Cubulation, Halfspace, HalfspaceSystem, Ultrafilter, MAX_CUBULATION_VERTICES};
