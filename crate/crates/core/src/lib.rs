//! Matrix means and matrix-monotone functional calculus for accretive and
//! sectorial complex matrices.

pub mod error;
pub mod funcalc;
pub mod linalg;
pub mod maps;
pub mod means;
pub mod sector;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
