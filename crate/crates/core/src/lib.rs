//! Exact computations around canonically oriented Heegaard Floer theory:
//! Pin and coupled Spin group arithmetic, the absolute Z/2 grading of
//! Heegaard diagram generators, sign assignments for grid diagrams,
//! integral grid homology, and the genus-one triangle counts behind the
//! twisted surgery exact triangle.

// index loops mirror the matrix formulas
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod clifford;
pub mod grading;
pub mod grid;
pub mod homology;
pub mod linalg;
pub mod perm;
pub mod signs;
pub mod torus_triangles;
