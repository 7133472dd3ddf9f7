//! Exact integer chain complexes and quantitative homotopy retracts.

pub mod cli;
pub mod equivariant;
pub mod error;
pub mod folner;
pub mod homology;
pub mod htpy;
pub mod int;
pub mod matrix;
pub mod pipeline;
pub mod random;
pub mod rebuild;
pub mod zchain;

pub use error::{Error, Result};
