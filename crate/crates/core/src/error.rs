use alloc::boxed::Box;

use crate::instance::{EdgeId, Label, VertexId};
use crate::lp::{EdgeLpSolution, UgLpSolution};

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// The solution a cutting-plane loop held when it gave up.
#[derive(Clone, Debug)]
pub enum PartialSolution {
    Edge(EdgeLpSolution),
    Ug(UgLpSolution),
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,
    #[error("edge {edge}: endpoint {vertex} is out of range")]
    VertexOutOfRange { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} is a self-loop")]
    SelfLoop { edge: EdgeId },
    #[error("edge {edge}: cost must be finite and non-negative")]
    InvalidCost { edge: EdgeId },
    #[error("edge {edge}: constraint is not a valid {expected} over the alphabet")]
    InvalidConstraint { edge: EdgeId, expected: &'static str },
    #[error("assignment has {got} labels, instance has {expected} vertices")]
    AssignmentLength { expected: usize, got: usize },
    #[error("vertex {vertex} carries label {label}, outside the alphabet")]
    InvalidAssignment { vertex: VertexId, label: Label },
    #[error("walk step {step} does not continue from the current vertex")]
    InvalidWalk { step: usize },
    #[error("operation is only defined for 2Lin instances")]
    RequiresTwoLin,
    #[error("{what}: size {size} exceeds the cap {cap}")]
    SizeCapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("edge weights must be finite and non-negative (edge {edge})")]
    InvalidWeight { edge: EdgeId },
    #[error("partition does not cover vertex {vertex} exactly once")]
    InvalidPartition { vertex: VertexId },
    #[error("restricted LP is infeasible")]
    Infeasible,
    #[error("restricted LP is unbounded")]
    Unbounded,
    #[error("simplex exceeded {0} pivots")]
    PivotLimit(usize),
    #[error("LP solver failed: {0}")]
    Solver(alloc::string::String),
    #[error("cutting-plane loop did not converge within {rounds} rounds")]
    NoConvergence {
        rounds: usize,
        partial: Box<PartialSolution>,
    },
    #[error("LP solution violates its constraints: {0}")]
    InfeasibleSolution(&'static str),
    #[error("instance has zero total cost")]
    DegenerateInstance,
    #[error("vertices {u} and {v} lie in different trees")]
    DifferentClusters { u: VertexId, v: VertexId },
}
