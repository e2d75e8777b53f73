//! Exact enumeration of self-avoiding walks and their forward, backward and
//! doubly extendable variants on infinite quasi-transitive directed graphs.

pub mod cli;
pub mod dimension;
pub mod enumerate;
pub mod error;
pub mod extend;
pub mod graph;
pub mod sawtree;
pub mod symmetry;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{Graph, GraphFamily, VertexId};
pub use walk::{Walk, WalkRef};
