//! Crate-wide error type.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by geometry, FEM, analytics and experiment layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("non-convex profile: second difference {value:.3e} < 0 at x = {location:.6}")]
    NonConvex { location: f64, value: f64 },

    #[error("coefficient matrix not symmetric positive definite at ({x:.6}, {y:.6})")]
    NonSpdCoefficient { x: f64, y: f64 },

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("mesh refinement stalled: {0}")]
    MeshRefinement(String),

    #[error("linear solver error: {0}")]
    Solver(String),

    #[error("eigensolver did not converge: {0}")]
    EigenConvergence(String),

    #[error("degenerate field: {0}")]
    DegenerateField(String),

    #[error("unknown experiment '{name}'; registered: {registered}")]
    UnknownExperiment { name: String, registered: String },

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }
}
