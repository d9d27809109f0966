//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty vertex list")]
    EmptyVertices,
    #[error("vertex {index} has {got} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(Vec<i64>),
    #[error("polytope is not full-dimensional (affine hull has dimension {rank} < {dim})")]
    Degenerate { rank: usize, dim: usize },
    #[error("vertex {0:?} is not a vertex of the convex hull")]
    RedundantVertex(Vec<i64>),
    #[error("origin is not in the interior of the polytope")]
    OriginNotInterior,
    #[error("polytope is not reflexive: facet {normal:?} has offset {offset}")]
    NotReflexive { normal: Vec<i64>, offset: i64 },
    #[error("vertex {vertex:?} of the dual polytope lies on {count} facets, expected {dim}")]
    NonSimpleVertex {
        vertex: Vec<i64>,
        count: usize,
        dim: usize,
    },
    #[error("integer overflow in exact arithmetic: {0}")]
    ExactOverflow(String),
    #[error("hull invariant violated: {0}")]
    HullInvariant(String),
    #[error("family index must be >= 1, got {0}")]
    BadFamilyIndex(i64),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("dimension mismatch: {0}")]
    LaurentDimension(String),
    #[error("point has a zero coordinate at index {0}")]
    ZeroCoordinate(usize),
    #[error("root finder failed to converge: {0}")]
    RootFinder(String),
    #[error("empty critical set for a product factor")]
    EmptyFactor,
    #[error("Newton refinement failed: {0}")]
    Newton(String),
    #[error("parameter check failed: {0}")]
    ParamCheck(String),
    #[error("dimension {dim} exceeds the configured maximum {max}")]
    DimensionCap { dim: usize, max: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("polytope is not smooth")]
    NotSmooth,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
