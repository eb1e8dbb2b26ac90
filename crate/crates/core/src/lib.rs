//! Detection and quantification of entanglement in finite-dimensional
//! multipartite quantum states.
//!
//! Two complementary formalisms are provided:
//!
//! * [`graphstate`] represents density matrices as weighted graphs whose
//!   generalized Laplacian is the (unnormalized) state, with graph operators,
//!   a modified tensor product and a degree-based separability test.
//! * [`bloch`] expands a state in SU(d) generators. The resulting correlation
//!   tensors drive the Ky Fan separability tests in [`separability`] and the
//!   tensor-norm entanglement measures in [`measures`].
//!
//! Subsystem and tensor-mode indices are 1-based throughout the public API.
//! Entry indices into arrays, vectors and graph vertices are 0-based.

pub mod bloch;
pub mod error;
pub mod experiments;
pub mod factor;
pub mod graphstate;
pub mod measures;
pub mod numcore;
pub mod separability;
pub mod state;
pub mod tensor;

pub use error::{Error, Result};
pub use numcore::{CMatrix, CVector, Dims, RMatrix};
pub use state::{DensityMatrix, PureState};
pub use tensor::DenseTensor;
