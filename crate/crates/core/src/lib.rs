pub mod cli;
pub mod error;
pub mod flat;
pub mod lie;
pub mod linalg;
pub mod mpoly;
pub mod poly;
pub mod rep;
pub mod scalar;
pub mod symbol;

pub use error::{Error, Result};
pub use scalar::Scalar;
