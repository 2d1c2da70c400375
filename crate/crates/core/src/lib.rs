//! Reversible pebbling of trees and DAGs.

pub mod generators;
pub mod oracle;
pub mod pebbling;
pub mod ranking;
pub mod strategy;
pub mod text;
pub mod treecore;
