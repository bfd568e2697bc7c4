//! Exact computer algebra for quantum principal bundles with finite structure
//! quantum groups: braidings, gauge groupoids and differential calculi.

pub mod algebra;
pub mod braiding;
pub mod bundle;
pub mod calculus;
pub mod error;
pub mod fodc;
pub mod gauge;
pub mod hopf;
pub mod linalg;
pub mod report;
pub mod runner;
pub mod scalar;
pub mod specfile;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::Scalar;
