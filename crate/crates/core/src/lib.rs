//! Numerical toolkit for free spectrahedra, mixed row-contraction sets and
//! absolute extreme points of matrix convex sets.
//!
//! Modules, bottom-up:
//!
//! - [`numkernel`]: tolerance-gated hermitian eigen/PSD/rank primitives.
//! - [`pencil`]: hermitian monic linear pencils and spectrahedron membership.
//! - [`mixedsets`]: the sets `D(d, g)`, maximality, witness dilations and the
//!   dilation-to-maximal algorithm.
//! - [`convexbody`]: planar and low-dimensional convex bodies, standard
//!   position, the defining function and extreme-point classifiers.
//! - [`matrange`]: level-one matrix ranges, `W^max` membership, paraboloid
//!   certificates and 2x2 dilation search/refutation.
//! - [`report`] and [`reproduce`]: verification reports and the full
//!   reproduction harness used by the `mcx` CLI.

pub mod convexbody;
pub mod error;
pub mod json;
pub mod matrange;
pub mod mixedsets;
pub mod numkernel;
pub mod pencil;
pub mod random;
pub mod report;
pub mod reproduce;

pub use error::{Error, Result};
pub use numkernel::{ComplexMatrix, ToleranceConfig, C64};
pub use pencil::{HermitianPencil, MatrixTuple, Membership};
