//! Finite-dimensional frame theory toolkit.
//!
//! Dense complex linear algebra, frames and Riesz sequences, R-dual
//! constructions of types I-IV with decision procedures and constructive
//! witnesses, and discrete Gabor systems on the cyclic group of order `L`
//! with a numerical verification of the duality principle.

pub mod error;
pub mod frames;
pub mod gabor;
pub mod io;
pub mod linalg;
pub mod patterns;
pub mod rduals;

pub use error::Error;
pub use linalg::{CMat, CVec, Tol, C64};

/// Library-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
