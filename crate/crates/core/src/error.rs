//! Error types for mesh I/O, quadrature construction, the solver oracle,
//! and the reference fields.

use std::path::PathBuf;
use thiserror::Error;

/// Errors from mesh construction, file parsing, and validation.
#[derive(Debug, Error)]
pub enum MeshError {
    /// Underlying I/O failure (file missing, unreadable, ...).
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A header or row could not be parsed; carries the 1-based line number.
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    /// The file parsed but describes something this crate does not handle
    /// (e.g. non-3D points, elements that are not 4-node tetrahedra).
    #[error("{path}:{line}: unsupported format: {msg}")]
    Unsupported { path: PathBuf, line: usize, msg: String },

    /// The mesh data is structurally invalid (indices out of range,
    /// degenerate cells, mismatched array lengths, ...).
    #[error("mesh validation: {0}")]
    Validation(String),
}

/// Errors from quadrature-rule construction.
#[derive(Debug, Error)]
pub enum QuadratureError {
    /// Requested order is zero or above the supported maximum.
    #[error("quadrature order {order} outside supported range 1..={max}")]
    InvalidOrder { order: usize, max: usize },
}

/// Errors from the direct volume-quadrature oracle.
#[derive(Debug, Error)]
pub enum OracleError {
    /// The evaluation point lies inside or on tetrahedron `tet`; the
    /// integrand is singular there and the oracle refuses to average
    /// across the singularity.
    #[error("evaluation point is inside or touching tetrahedron {tet}")]
    SingularPoint { tet: usize },
}

/// Errors from the analytic/tabulated reference fields.
#[derive(Debug, Error)]
pub enum ReferenceError {
    /// A table lookup outside the tabulated domain.
    #[error("query point (r={r}, z={z}) outside tabulated domain")]
    OutOfRange { r: f64, z: f64 },

    /// Computed/reference sample arrays of different lengths.
    #[error("length mismatch: {computed} computed vs {reference} reference samples")]
    LengthMismatch { computed: usize, reference: usize },

    /// Invalid parameter for a reference field or its tabulation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
