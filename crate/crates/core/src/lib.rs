//! Exact symplectic cohomology workbench.

pub mod cohomology;
pub mod exactlinalg;
pub mod exterior;
pub mod model;
pub mod sl2ops;
pub mod duality;
pub mod sampling;
pub mod fuzz;
pub mod report;
pub mod cli;
