//! Triadic analysis of directed and signed networks.

pub mod dynamics;
pub mod error;
pub mod graph;
pub mod motifs;
pub mod nospam;
pub mod randomizer;
pub mod rng;
pub mod stats;
pub mod sts;
pub mod trgm;
pub mod triads;

pub use error::{Error, Result};
pub use graph::{DirectedGraph, Sign, SignedGraph};
