pub mod cli;
pub mod clifford;
pub mod error;
pub mod expansion;
pub mod integrals;
pub mod ncpoly;
pub mod numeric;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::{GaussianRational, PiCoefficient, GQ, Q};
