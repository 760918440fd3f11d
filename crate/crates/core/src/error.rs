use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("non-triangle face {face} ({arity} vertices)")]
    NonTriangleFace { face: usize, arity: usize },
    #[error("face {face} references vertex {vertex} out of range")]
    VertexOutOfRange { face: usize, vertex: usize },
    #[error("face {face} is degenerate (repeated vertex)")]
    RepeatedVertex { face: usize },
    #[error("non-manifold edge {edge:?}: borders {count} faces")]
    NonManifoldEdge { edge: [usize; 2], count: usize },
    #[error("open boundary at edge {edge:?}")]
    OpenBoundary { edge: [usize; 2] },
    #[error("inconsistent orientation at edge {edge:?}")]
    Orientation { edge: [usize; 2] },
    #[error("link of vertex {vertex} is not a single cycle")]
    VertexLink { vertex: usize },
    #[error("isolated vertex {vertex}")]
    IsolatedVertex { vertex: usize },
    #[error("mesh has no embedding coordinates")]
    MissingEmbedding,
    #[error("face {face} is degenerate (zero area)")]
    DegenerateFace { face: usize },
    #[error("triangle inequality violated on face {face} (lengths {lengths:?})")]
    TriangleInequality { face: usize, lengths: [f64; 3] },
    #[error("edge {edge} has non-positive or non-finite length {length}")]
    BadLength { edge: usize, length: f64 },
    #[error("size mismatch: expected {expected} {what}, got {got}")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("metric overlay names edge ({0}, {1}) which is not in the mesh")]
    UnknownEdge(usize, usize),
    #[error("metric overlay misses edge {0:?}")]
    MissingEdge([usize; 2]),
    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Euler characteristic {chi} is not negative")]
    NonHyperbolic { chi: i64 },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("shape operator on face {face} is not admissible: {reason}")]
    Shape { face: usize, reason: String },
    #[error("Gauss residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    GaussResidual { residual: f64, tol: f64 },
    #[error("ill-conditioned finite-part fit (condition number {cond:.3e}); widen the z grid")]
    IllConditioned { cond: f64 },
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("Newton solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("line search broke triangle inequalities at iteration {iteration} (residual {residual:.3e})")]
    LineSearch { iteration: usize, residual: f64 },
    #[error("residual stagnated at {residual:.3e} after {iterations} iterations; target infeasible")]
    Stagnated { iterations: usize, residual: f64 },
    #[error("linear solve failed at iteration {iteration}: {message}")]
    Linear { iteration: usize, message: String },
}
