//! File formats, reports, threaded Monte Carlo and the command line for
//! [`stochcover_core`].

pub mod bench;
pub mod cli;
pub mod document;
pub mod montecarlo;
pub mod report;

pub use document::{parse_instance, read_instance, serialize_instance, Document, DocumentError};
pub use report::{ResultBlock, SolveReport};
