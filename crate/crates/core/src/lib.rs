//! Integral currents on simplicial complexes over metric spaces.
//!
//! Chains with integer coefficients stand in for integral currents. The crate
//! provides their boundary and mass calculus, exact slicing along PL level
//! sets, flat norms and filling volumes as linear programs, sliced filling
//! volumes and the tetrahedral property, products with intervals, and a small
//! laboratory for checking continuity and semicontinuity along sequences of
//! meshes placed in explicit common embeddings.

pub mod complex;
pub mod current;
pub mod error;
pub mod fillvol;
pub mod io;
pub mod lab;
pub mod linalg;
pub mod lp;
pub mod meshgen;
pub mod metric;
pub mod metricspace;
pub mod product;
pub mod slicedfill;
pub mod slicing;
pub mod transport;

pub use complex::GeometricComplex;
pub use current::{PLFunction, SimplicialCurrent};
pub use error::{Error, Result};
pub use fillvol::FillingReport;
pub use metric::Metric;
pub use metricspace::FiniteMetricSpace;
