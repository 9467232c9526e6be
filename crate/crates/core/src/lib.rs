//! Geodesic geometry and concentration-of-measure machinery for CAT(0) spaces.
//!
//! The crate provides:
//!
//! - [`spaces`] — metric/geodesic kernels for finite R-trees, the hyperboloid
//!   model of hyperbolic space, flat Euclidean space, and l1 products, with
//!   CAT(0) comparison diagnostics;
//! - [`measures`] — finitely supported probability measures and deterministic
//!   counter-indexed sampling;
//! - [`means`] — the order-dependent inductive mean, exact and iterative
//!   barycenter solvers, and variance-inequality diagnostics;
//! - [`mm`] — brute-force metric-measure invariants (partial diameter,
//!   separation distance, central radius, concentration function) on small
//!   finite spaces;
//! - [`bounds`] — closed-form evaluators for the Gaussian tail bounds and
//!   their constants;
//! - [`montecarlo`] — the simulation harness that estimates tail
//!   probabilities of inductive means and checks them against the bounds;
//! - [`suites`] — batched invariant suites backing the `verify` CLI command.

pub mod bounds;
pub mod error;
pub mod file;
pub mod means;
pub mod measures;
pub mod mm;
pub mod montecarlo;
pub mod random;
pub mod spaces;
pub mod stats;
pub mod suites;

pub use error::{Error, Result};
