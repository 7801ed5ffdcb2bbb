//! Semi-Hilbert operator quantities for finite-dimensional complex matrices
//! with a positive semidefinite weight, plus batch verification of the
//! inequality chains and identities they satisfy.
//!
//! The layers, bottom up:
//! - [`matrix`], [`eig`], [`spectral`]: dense complex linear algebra with no
//!   weighted semantics (Jacobi eigensolver, pseudoinverse, PSD square root,
//!   operator norm, numerical radius, spectral radius).
//! - [`semihilbert`]: contexts built from a weight A and the A-relative
//!   quantities (adjoint, seminorm, numerical radius, spectral radius),
//!   all routed through the compression A^{1/2}·T·(A^{1/2})^†.
//! - [`inequalities`]: each inequality chain and identity evaluated as an
//!   ordered scalar tuple with pass/fail margins.
//! - [`generators`]: seeded random instances of every operator population.
//! - [`oracle`], [`report`], [`verify`]: definitional Monte-Carlo oracles,
//!   file formats, and the batch verification engine behind the CLI.

pub mod eig;
pub mod error;
pub mod generators;
pub mod inequalities;
pub mod matrix;
pub mod oracle;
pub mod report;
pub mod semihilbert;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use semihilbert::{AOperator, SemiHilbertContext};
