pub mod elementary;
pub mod entropy;
pub mod error;
pub mod cli;
pub mod interval;
pub mod prover;
pub mod quad;

pub use error::{Error, Result};
pub use interval::{Box2, Interval};
