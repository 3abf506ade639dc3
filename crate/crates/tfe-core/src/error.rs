//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Grid construction with too few nodes to resolve fourth derivatives.
    #[error("grid needs at least 8 nodes, got {0}")]
    GridTooSmall(usize),

    /// A field was combined with a grid it does not live on.
    #[error("field/grid mismatch: field has {field_len} values, grid has {grid_len} nodes")]
    GridMismatch { field_len: usize, grid_len: usize },

    /// Evaluation point outside the reference interval.
    #[error("point {0} lies outside [-1, 1]")]
    OutOfDomain(f64),

    /// A field violates a structural invariant (finiteness, boundary values, ...).
    #[error("invalid field: {0}")]
    InvalidField(String),

    /// `1 + g` dropped to zero or below; the Lagrangian map is not invertible.
    #[error("positivity lost: min(1 + g) = {min:.6e} at node {node}")]
    PositivityLoss { min: f64, node: usize },

    /// Initial data outside the prescribed-contact-angle model class.
    #[error("contact-angle violation: |u_x| deviates from 1 by {0:.3e} at a support edge")]
    ContactAngle(f64),

    /// An Eulerian profile failed validation (mass, monotonicity, support, ...).
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    /// Out-of-domain scalar arguments (exponents, rates, tolerances).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Not enough samples for a fit or a finite-difference estimate.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// The implicit solve produced a singular or non-finite system.
    #[error("linear solve failed: {0}")]
    SingularSystem(String),

    /// Adaptive stepping hit the dt floor; the partial record is preserved.
    #[error("time step underflow at t = {t:.6e}: dt fell below {dt_min:.3e}")]
    StepUnderflow {
        t: f64,
        dt_min: f64,
        record: Box<crate::evolution::TrajectoryRecord>,
    },

    /// A required precondition did not hold (e.g. no zero for the Poincaré check).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// I/O failure with path context.
    #[error("i/o error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input file (profile or series).
    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}
