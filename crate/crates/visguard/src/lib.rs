//! Vertex guarding for polygons with holes.
//!
//! The pipeline: compute per-vertex visibility polygons, cut their windows
//! into the polygon to obtain the minimum visibility decomposition, extract
//! the sink cells of the directed dual, discretize guarding as a hitting-set
//! instance over the sink ranges, and solve it with a greedy cover, an
//! iterative-reweighting net solver, or an exact oracle on small inputs.
//!
//! All geometry is done in exact rational arithmetic; inputs that violate
//! the general-position requirements are rejected rather than perturbed.

pub mod arrangement;
pub mod bitset;
pub mod corpus;
pub mod epsnet;
pub mod generate;
pub mod geom;
pub mod io;
pub mod rangespace;
pub mod solvers;
pub mod stats;
pub mod svg;
pub mod visibility;

pub use bitset::VertexSet;
pub use geom::{Location, Point, PolygonWithHoles, Rat, VertexRef};

/// Errors surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("point lies outside the polygon: ({0}, {1})")]
    PointOutside(String, String),
    #[error("window endpoint off the boundary: ({0}, {1})")]
    WindowOffBoundary(String, String),
    #[error("pocket undefined for a transverse window")]
    TransPocket,
    #[error("arrangement inconsistency: {0}")]
    Inconsistent(String),
    #[error("instance too large for the exact oracle: {n} vertices exceeds cap {cap}")]
    OracleCap { n: usize, cap: usize },
    #[error("epsilon {0} out of range: {1}")]
    EpsilonRange(String, String),
    #[error("net solver failed to terminate: {0}")]
    SolverStuck(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
