//! Exact computation with iterated sumsets `NA = A + ... + A` of finite
//! sets `A` in `Z^d`.
//!
//! The crate counts and enumerates sumsets, fits and derives the
//! polynomials that eventually give `|NA|`, verifies the description of
//! `NA` as a hull-and-lattice region minus translates of exceptional
//! sets, and provides the minimal-element systems and bounded integer
//! solvers behind effective thresholds.

pub mod bounded_solve;
pub mod cli;
pub mod error;
mod intmat;
pub mod khovanskii;
pub mod lattice;
pub mod minimal;
pub mod polytope;
pub mod structure;
pub mod sumset;

pub use error::{Error, Result};
pub use lattice::{FiniteAbelianGroup, IntegerLattice, LatticePoint};
pub use sumset::{GrowthTable, PointSet};
