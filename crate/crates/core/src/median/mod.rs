//! Finite median algebras and the constructive lemmas about them.

mod model;
mod ops;
mod rank;
mod squares;
mod table;

pub use model::{ClosureReport, MedianModel, CLOSURE_EXHAUSTIVE_TRIPLES, CLOSURE_SAMPLES};
pub use ops::{Interval, IntervalIntersection};
pub use squares::{CubeWitness, SquareClass, SquareKind, SquareProduct};
pub use table::{
    sholander_median, verify_axioms, verify_axioms_by_wall, AxiomReport, IntervalMap, Law,
    MedianTable, SholanderFailure, Violation, EXHAUSTIVE_AXIOM_LIMIT,
};
