//! Minkowski (2+1) geometry, crooked planes and proper affine deformations of
//! three-holed spheres, with exact verification over the rationals.

pub mod crooked;
pub mod error;
pub mod isometry;
pub mod lp;
pub mod matrix;
pub mod minkowski;
pub mod sample;
pub mod scalar;
pub mod sym2;
pub mod symplectic;
pub mod threeholed;

pub use error::{Error, Result};
