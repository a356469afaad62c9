use thiserror::Error;

use crate::name::VertexName;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("malformed vertex name `{0}`")]
    Name(String),
    #[error("line {line}: {reason}")]
    Line { line: usize, reason: String },
    #[error("empty input")]
    Empty,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("degree target {0} must be even and at least 6")]
    InvalidDegree(u32),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexName),
    #[error("self-loop on {0}")]
    SelfLoop(VertexName),
    #[error("vertex {0} has no incident edge and cannot be written to a graph file")]
    IsolatedVertex(VertexName),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("need at least 2 vertices, got {0}")]
    TooSmall(usize),
    #[error("eigensolver did not converge on a {n}x{n} matrix within {max_iterations} iterations")]
    NoConvergence { n: usize, max_iterations: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LiftError {
    #[error("base graph is not simple and regular: {0}")]
    BadBase(String),
    #[error("signing does not cover edge {0}-{1}")]
    IncompleteSigning(VertexName, VertexName),
    #[error("signing mentions {0}-{1} which is not a base edge")]
    ForeignEdge(VertexName, VertexName),
    #[error("search budget exhausted: best lambda {best_lambda:.6} exceeds budget {budget:.6} after {candidates} candidates")]
    BudgetExhausted {
        best_lambda: f64,
        budget: f64,
        candidates: usize,
    },
    #[error("expected a doubled graph (all weights 2), found weight {weight} on {a}-{b}")]
    NotDoubled { a: VertexName, b: VertexName, weight: u32 },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrowError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error("n = {n} is below the base clique size {min}")]
    InvalidSize { n: usize, min: usize },
    #[error("every vertex of the cycle is already split")]
    CycleComplete,
    #[error("cycle still has {0} unsplit vertices")]
    CycleIncomplete(usize),
    #[error("construction invariant violated ({lemma}): {detail}")]
    Invariant { lemma: &'static str, detail: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("exact enumeration supports at most {max} vertices, graph has {n}; use the spectral bounds instead")]
    TooLarge { n: usize, max: usize },
    #[error("vertex set must be a nonempty proper subset")]
    DegenerateSet,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Grow(#[from] GrowError),
    #[error(transparent)]
    Lift(#[from] LiftError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("node id {0:?} already exists")]
    DuplicateId(String),
    #[error("unknown node id {0:?}")]
    UnknownId(String),
    #[error("an inserted node needs at least one attach neighbour")]
    NoAttach,
    #[error("cannot delete below the base size of {0} nodes")]
    AtBaseSize(usize),
    #[error("message of {bits} bits exceeds the {budget}-bit budget")]
    MessageTooLarge { bits: u64, budget: u64 },
    #[error("no route from {from} to {to}")]
    NoRoute { from: VertexName, to: VertexName },
    #[error("protocol bug: {0}")]
    Protocol(String),
    #[error("event {event}: network diverges from the reference graph: {detail}")]
    Desync { event: usize, detail: String },
    #[error("script parse error: {0}")]
    Script(String),
    #[error(transparent)]
    Grow(#[from] GrowError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
