//! Gradient flow: zeros, orbits, direction partitions at sources,
//! separatrices and the connection graph.

mod analyzer;
mod critical;
mod graph;
mod level;
pub mod lemmas;
pub mod ode;
mod partition;

pub use analyzer::{
    integrate, source_frame, Direction, FlowAnalyzer, IntegrationCaps, LimitLabel, SourceFrame, Trajectory,
};
pub use critical::{
    classify_hessian, find_critical_points, newton_refine, CriticalKind, CriticalPoint, CriticalSearch, DEGENERACY,
    MERGE_RADIUS, ZERO_TOL,
};
pub use graph::{
    analyze_portrait, check_generic, connection_graph, default_escape_radius, genericity_violations, FlowPortrait,
    GenericityReport, GenericityViolation, DEFAULT_DIRECTIONS, SADDLE_CONNECTION_TOL,
};
pub use level::{trace_level_set, CurveKind, LevelCurve};
pub use partition::{AngularArc, DirectionPartition, SaddleManifolds, Separatrix, ANGLE_TOL, BRANCH_OFFSET};

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum FlowError {
    #[error("field nearly vanishes on the search boundary (min |f| = {min_norm:e})")]
    BoundaryZero { min_norm: f64 },
    #[error("step size underflow at t = {t} near ({x}, {y})")]
    StepUnderflow { t: f64, x: f64, y: f64 },
    #[error("critical point {0} is not a source")]
    NotASource(usize),
    #[error("critical point {0} is not a saddle")]
    NotASaddle(usize),
    #[error("{unresolved} of {total} launch directions did not resolve")]
    UnresolvedArc { unresolved: usize, total: usize },
    #[error("gradient vanishes on the traced level set near ({x}, {y})")]
    CriticalLevel { x: f64, y: f64 },
    #[error("field has a degenerate zero at ({x}, {y})")]
    DegenerateZero { x: f64, y: f64 },
}
