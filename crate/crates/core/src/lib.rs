//! Nonequilibrium cost of accuracy for quantum information-processing tasks.

pub mod cli;
pub mod cost;
pub mod entropy;
pub mod error;
pub mod qmat;
pub mod quantum;
pub mod random;
pub mod sdp;
pub mod tasks;
pub mod verify;

pub use error::{Error, Result};
