//! Rule induction with feature selection, for classification under missing data.
//!
//! The crate is `no_std` (it needs `alloc`) and holds only the algorithms:
//!
//! - [`data`]: attribute schema, cells with explicit missingness, datasets.
//! - [`missingness`]: seeded MCAR degradation of test sets.
//! - [`ripper`]: the RIPPER rule learner and first-match classifier.
//! - [`pca`]: correlation-matrix PCA on a cyclic Jacobi eigensolver.
//! - [`ard`]: a two-layer Bayesian perceptron with evidence-based ARD.
//! - [`pipeline`]: the Ripper, PCA-Rip and ARD-Rip compositions.
//!
//! File formats, configuration and the command line live in the `ripfs`
//! companion crate.
#![no_std]
// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod ard;
pub mod data;
mod error;
pub mod linalg;
pub mod missingness;
pub mod pca;
pub mod pipeline;
pub mod ripper;
pub mod rng;

pub use error::{Error, Result};
