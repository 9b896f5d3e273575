//! Cographs, their cotrees, and (s,k)-polar partitions.
//!
//! The crate is `no_std` with `alloc`. Graphs have at most 64 vertices and
//! store adjacency as one `u64` row per vertex.

#![no_std]

extern crate alloc;

pub mod catalog;
pub mod cotree;
pub mod expr;
pub mod graph;
pub mod obstruction;
pub mod polarity;

pub use cotree::{CanonicalCode, Cotree, Op, Recognition};
pub use expr::CographExpr;
pub use graph::{Graph, VertexSet};
pub use polarity::{Param, PolarProfile, Signature};
