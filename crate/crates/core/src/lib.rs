pub mod entropy;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod minimize;
pub mod surfing;
pub mod synth;
pub mod tree;

pub use error::{Error, Result};
