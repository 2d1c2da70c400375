//! Rooted trees and DAGs: the boards the pebble games are played on.
//!
//! Edges point from child to parent (`u v` means `u -> v`), so the root is
//! the unique sink. Node tokens are kept sorted; a node's index is its rank
//! in lexicographic order.

mod graph;
mod ops;
mod separator;
mod undirected;

use thiserror::Error;

pub use graph::{parse_graph, parse_tree, Dag, Graph, RootedTree};
pub use ops::{chain, chain_plus_bt, complete_binary_tree, reroot_at_leaf, split, subtree};
pub(crate) use separator::Carver;
pub use separator::{separator_subtree, PieceBounds};
pub use undirected::{parse_undirected, underlying, UndirectedTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no nodes")]
    Empty,
    #[error("line {line}: expected `u v` or `v`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("duplicate node token")]
    DuplicateNode,
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("cycle detected through node {0}")]
    Cycle(String),
    #[error("graph has several sinks: {}", .0.join(", "))]
    MultipleSinks(Vec<String>),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not a rooted tree")]
    NotATree,
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("unknown edge {0} -> {1}")]
    UnknownEdge(String, String),
    #[error("node {0} is not a leaf")]
    NotALeaf(String),
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("tree of {size} nodes is not larger than {n}^(({k0}-1)/{k0})")]
    SeparatorPrecondition { size: usize, n: usize, k0: u32 },
}
