pub mod bench;
pub mod character;
pub mod cli;
pub mod convolution;
pub mod covariant;
pub mod error;
pub mod function;
pub mod group;
pub mod json;
pub mod semidirect;
pub mod verify;

pub use error::{Error, Result, MAX_ORDER};
