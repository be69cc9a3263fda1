//! Generalized short-time Fourier transforms, coorbit norms and coherent
//! frame diagnostics for five nilpotent Lie groups.

// `!(x > 0.0)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coorbit;
pub mod error;
pub mod frames;
pub mod gaussian;
pub mod groups;
pub(crate) mod linalg;
pub mod numerics;
pub mod representations;

pub use error::{Error, Result};
