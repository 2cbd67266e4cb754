//! Reduction of the connection graph by cancellation moves, their
//! realization on potentials, and the resulting classification.

mod cancel;
mod classify;
mod graph;
mod moves;

pub use cancel::{realize_cancellation, Cancellation, BLEND_TOL, LOBE_WIDTHS, MERGE_WINDOW, RAMP, TUBE_WIDTHS};
pub use classify::{classify, ClassLabel, Classification, ClassifyOptions, FullCircleWitness, WitnessStep};
pub use graph::{ConnectionGraph, Edge, GraphNode, NodeRef};
pub use moves::{apply_move_graph, orbits_between, perturb_value, pick_cancellation, Pick, ReductionMove};

use thiserror::Error;

use crate::flow::FlowError;
use crate::homotopy::HomotopyError;
use crate::invariants::InvariantError;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ReductionError {
    #[error("no saddle is reachable from the chosen extremum {node:?}")]
    NoSaddleReachable { node: Option<usize> },
    #[error("invalid move: {reason}")]
    InvalidMove { reason: &'static str },
    #[error("another critical point or the orbit itself leaves every candidate tube")]
    TubeNotClear,
    #[error("no tube template cancels the pair without creating zeros")]
    TemplateInfeasible,
    #[error("cancellation path does not start at the field (residual {residual:e})")]
    BlendResidual { residual: f64 },
    #[error("field is not proper")]
    NotProper,
    #[error("reduction ended with {remaining} zeros for degree {degree}")]
    CountMismatch { degree: i64, remaining: usize },
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
}
