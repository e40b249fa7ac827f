//! Discretized fractal sets on dyadic grids: trees, measures, entropy,
//! sumsets, distance sets and dimension estimates.

pub mod arithmetic;
pub mod cells;
pub mod dyadic;
pub mod error;
pub mod estimate;
pub mod generators;
pub mod lab;
pub mod measure;
pub mod rational;
pub mod sample;

pub use cells::{BitGrid, CellSet};
pub use dyadic::{discretize, interval_of, locate, DyadicInterval, DyadicTree, Vertex};
pub use error::{Error, Result};
pub use measure::{covering_bounds_check, LocalClass, ScaleProfile, TreeMeasure};
