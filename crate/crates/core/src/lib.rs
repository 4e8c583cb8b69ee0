//! Dirichlet-Laplacian spectra of disks with symmetric cracks.
//!
//! The crate discretizes the Laplacian in polar coordinates on a disk whose
//! interior circle `r = R1` carries `N` rotationally symmetric Dirichlet cracks,
//! reduces the problem to rotation (Floquet) sectors or, for `N = 2`, to four
//! quarter-disk problems, and computes the lowest eigenvalues with certified
//! residuals. On top of that it sweeps the crack opening, detects eigenvalue
//! crossings between sectors, confronts the computed curves with two-term
//! asymptotics, and computes condenser capacities of arcs.
//!
//! ```no_run
//! use crackspec::domain::CrackedDiskSpec;
//! use crackspec::spectra::solve_full_spectrum;
//!
//! let spec = CrackedDiskSpec::new(3, 0.3, 0.4356, 1.0).unwrap();
//! let merged = solve_full_spectrum(&spec, 180, 6, 1e-6).unwrap();
//! for level in merged.levels(1e-3) {
//!     println!("{:.4} x{}", level.eigenvalue, level.multiplicity);
//! }
//! ```

// Input checks are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod capacity;
pub mod cli;
pub mod discretize;
pub mod domain;
pub mod eigensolve;
pub mod error;
pub mod scalar;
pub mod specfun;
pub mod spectra;

pub use error::{Error, Result};

/// Schema version of every file format written by the crate (CSV, operator
/// dumps, zero tables, config files).
pub const SCHEMA_VERSION: u32 = 1;
