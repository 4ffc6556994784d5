//! Exact computations with LR pairs and LR triples over prime fields.

pub mod cli;
pub mod decomp;
pub mod error;
pub mod field;
pub mod gen;
pub mod linalg;
pub mod lrpair;
pub mod lrtriple;
pub mod toeplitz;

pub use error::{Error, Result};
pub use field::{Fp, PrimeField};
pub use linalg::{Line, Matrix, Subspace};
