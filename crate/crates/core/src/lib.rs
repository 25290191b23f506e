//! L² cohomology of local systems on punctured Riemann surfaces and their finite Galois covers.

pub mod cohomology;
pub mod disk;
pub mod error;
pub mod gamma;
pub mod group;
pub mod input;
pub mod numeric;
pub mod random;
pub mod report;
pub mod selftest;
pub mod surface;
pub mod weights;

pub use error::{Error, Result};
