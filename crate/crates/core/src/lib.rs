pub mod boxmodes;
pub mod cli;
pub mod commutator;
pub mod error;
pub mod gates;
pub mod quadrature;
pub mod scenario;
pub mod summation;
pub mod units;
pub mod vacuum;
pub mod vec3;

pub use error::{Error, Result};
pub use vec3::{Axis, CVec3, Vec3};
