use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) is a self-loop")]
    SelfLoop(VertexId, VertexId),
    #[error("edge ({0}, {1}) appears more than once")]
    DuplicateEdge(VertexId, VertexId),
    #[error("vertex {0} is out of range (vertex count {1})")]
    OutOfRange(VertexId, usize),
    #[error("vertex {0} has been deleted")]
    Deleted(VertexId),
    #[error("special neighbour {special} is not adjacent to {v}")]
    NotAdjacent { v: VertexId, special: VertexId },
    #[error("cannot merge adjacent qubits {0} and {1}")]
    AdjacentMerge(VertexId, VertexId),
    #[error("CZ needs two distinct qubits, got {0} twice")]
    SameVertex(VertexId),
    #[error("edge list parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("targets must be 2 or 3 distinct vertices")]
    BadTargets,
    #[error("target {0} is measured by the plan")]
    TargetMeasured(VertexId),
    #[error("vertex {0} is measured more than once")]
    MeasuredTwice(VertexId),
    #[error("final graph is not the declared target shape: {0}")]
    WrongShape(String),
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecError {
    #[error("invalid resource: {0}")]
    Invalid(String),
    #[error("no {style} path between {a} and {b}")]
    NoPath {
        style: &'static str,
        a: VertexId,
        b: VertexId,
    },
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Plan(#[from] PlanError),
}

impl From<GraphError> for SpecError {
    fn from(e: GraphError) -> Self {
        SpecError::Plan(PlanError::Graph(e))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{0} qubits exceeds the dense simulation cap of {1}")]
    TooLarge(usize, usize),
    #[error(transparent)]
    Plan(#[from] PlanError),
}

impl From<GraphError> for OracleError {
    fn from(e: GraphError) -> Self {
        OracleError::Plan(PlanError::Graph(e))
    }
}
