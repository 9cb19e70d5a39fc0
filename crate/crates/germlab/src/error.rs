//! Error type shared by the whole engine.

use crate::tower::Tower;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// A zero test hit a reducible defining polynomial.  The carried towers
    /// are the refinements; the enclosing computation must be re-run on each.
    #[error("tower split into {} branches", .0.len())]
    TowerSplit(Vec<Arc<Tower>>),

    /// A series query could not be answered at the current truncation.
    #[error("unresolved at current truncation: {0}")]
    Unresolved(String),

    #[error("arcs parametrise the same branch")]
    SameBranch,

    #[error("canyons coincide")]
    SameCanyon,

    #[error("no bar at the requested height on this path")]
    NoSuchBar,

    #[error("no polar branch off the zero locus")]
    EmptyPolar,

    #[error("empty cluster")]
    EmptyCluster,

    /// `f_x` and `f_y` share a component; the intersection number is infinite.
    #[error("non-isolated singularity")]
    NonIsolated,

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
