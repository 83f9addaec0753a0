//! Numerical laboratory for the Z2-staggered six-vertex / Temperley-Lieb model.

// Index loops mirror the formulas, and `!(x > 0.0)` rejects NaN on purpose.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate openblas_src;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod error;
pub mod operator;
pub mod tl_core;

pub use error::{Error, Result};
pub use operator::{Basis, SectorOperator, SparseMatrix, C64};
pub use tl_core::ModelParams;
pub mod lattice_models;
pub mod linalg;
pub mod bethe;
pub mod quadrature;
pub mod special;
pub mod spectra;
pub mod cft_partition;
pub mod tba_massive;
