//! Power domination on undirected and directed graphs.
//!
//! Node ids are dense and 0-based everywhere in this crate; the file formats
//! in [`graph::io`] are 1-based.

pub mod approx;
pub mod directed;
pub mod generators;
pub mod exact;
pub mod graph;
pub mod heuristics;
pub mod propagation;
pub mod regions;

pub use graph::{DirectedGraph, Node, NodeSet, TreeDecomposition, UndirectedGraph};
