//! Structure-constant toolkit for deciding when the Dirac operator of a
//! homogeneous Riemannian space has its simplest form.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod classical;
pub mod clifford;
pub mod decomp;
pub mod dirac;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod metric;
pub mod osla;
pub mod pipeline;
pub mod subspace;

pub use error::{Error, Result};
pub use lie::LieAlgebra;
pub use subspace::{BilinearForm, Subspace};
