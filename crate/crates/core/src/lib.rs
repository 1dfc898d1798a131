//! Period dimensions and high-precision period matrices of elliptic 1-motives.

pub mod arith;
pub mod dimension;
pub mod elliptic;
pub mod error;
pub mod hyper;
pub mod motive;
pub mod periods;
pub mod quad;
pub mod relations;
pub mod vanishing;

pub use error::{Error, Result};
