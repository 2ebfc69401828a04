//! LP relaxations, low-diameter decompositions and rounding for Unique
//! Games, Max-2Lin and Min-Uncut on structured constraint graphs.
//!
//! The crate is `no_std` and needs only `alloc`. File formats and the
//! command line live in the `ugdecomp` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod decompose;
pub mod error;
pub mod exact;
pub mod gen;
pub mod instance;
pub mod lp;
mod paths;
pub mod rounding;
pub mod seed;

pub use decompose::{Partition, Scheme, WeightedGraph};
pub use error::{Error, Result};
pub use instance::{
    Assignment, ClosedWalk, ClusterConsistency, Constraint, Edge, EdgeId, Evaluation,
    InstanceKind, Label, LabelExtendedGraph, Signature, UgInstance, VertexId,
};
pub use lp::{EdgeLpSolution, UgLpSolution};
