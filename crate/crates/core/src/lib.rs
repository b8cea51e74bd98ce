//! Property-testing laboratory for dense graphs.
//!
//! Sampling testers (universal, triangle, induced P₃), exact recognizers,
//! β-cut decompositions, witness packings that certify farness, hard-instance
//! gadgets, and a Monte-Carlo harness measuring detection probability versus
//! query budget.

pub mod decomposition;
pub mod error;
pub mod extremal;
pub mod gadgets;
pub mod graph;
pub mod harness;
pub mod packing;
pub mod recognizers;
pub mod rng;
pub mod testers;

pub use error::{Error, Result};
pub use graph::{Digraph, Graph, GraphBuilder, PartLabeling, PartName};
pub use recognizers::{Property, RecognitionResult};
pub use rng::{Seed, Stream};
