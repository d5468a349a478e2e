//! Exact walk counting and branching-ratio analysis for finite directed
//! multigraphs.
//!
//! The branching ratio of a node is the exponential growth rate of the
//! number of walks ending at it. It equals the largest Perron eigenvalue
//! over the strongly connected components upstream of the node; the
//! per-residue growth law is fitted from exact walk counts and checked
//! against an independent enumeration oracle.

pub mod asymptotics;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod report;
pub mod spectral;
pub mod structure;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{adjacency_matrix, induced_subgraph, is_acyclic, parse_edge_list, AdjacencyMatrix, MultiGraph, NodeId};
