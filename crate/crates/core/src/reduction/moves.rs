//! Choice and graph-level application of cancellation moves.

use alloc::vec::Vec;

use super::graph::{ConnectionGraph, NodeRef};
use super::ReductionError;
use crate::flow::CriticalKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionMove {
    /// Source and saddle joined by exactly one orbit.
    CancelPair { source: usize, saddle: usize },
    /// Source and saddle joined by exactly two orbits.
    TwoOrbitSurgery { source: usize, saddle: usize },
    /// Sink and saddle joined by exactly one orbit; the negated field's `CancelPair`.
    MirrorCancelPair { sink: usize, saddle: usize },
    /// Sink and saddle joined by exactly two orbits.
    MirrorTwoOrbitSurgery { sink: usize, saddle: usize },
}

impl ReductionMove {
    pub fn name(&self) -> &'static str {
        match self {
            ReductionMove::CancelPair { .. } => "cancel_pair",
            ReductionMove::TwoOrbitSurgery { .. } => "two_orbit_surgery",
            ReductionMove::MirrorCancelPair { .. } => "mirror_cancel_pair",
            ReductionMove::MirrorTwoOrbitSurgery { .. } => "mirror_two_orbit_surgery",
        }
    }

    /// `(extremum, saddle)` node ids.
    pub fn nodes(&self) -> (usize, usize) {
        match *self {
            ReductionMove::CancelPair { source, saddle } | ReductionMove::TwoOrbitSurgery { source, saddle } => {
                (source, saddle)
            }
            ReductionMove::MirrorCancelPair { sink, saddle } | ReductionMove::MirrorTwoOrbitSurgery { sink, saddle } => {
                (sink, saddle)
            }
        }
    }

    pub fn is_mirror(&self) -> bool {
        matches!(self, ReductionMove::MirrorCancelPair { .. } | ReductionMove::MirrorTwoOrbitSurgery { .. })
    }

    /// Orbits the move requires between its two nodes.
    pub fn required_multiplicity(&self) -> u32 {
        match self {
            ReductionMove::CancelPair { .. } | ReductionMove::MirrorCancelPair { .. } => 1,
            _ => 2,
        }
    }
}

/// A chosen move and, if saddle values tied, the saddle lowered to break it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pick {
    pub mv: ReductionMove,
    /// `(saddle id, δ)` passed to [`perturb_value`] before choosing.
    pub perturbed: Option<(usize, f64)>,
}

/// Orbits between extremum `x` and saddle `y`, in the direction the graph stores them.
pub fn orbits_between(g: &ConnectionGraph, x: usize, y: usize) -> u32 {
    match g.kind(x) {
        Some(CriticalKind::Source) => g.multiplicity(x, NodeRef::Point(y)),
        Some(CriticalKind::Sink) => g.multiplicity(y, NodeRef::Point(x)),
        _ => 0,
    }
}

/// Lowers the recorded value of node `id` by `delta`, as the bump lowering does to the potential.
pub fn perturb_value(g: &mut ConnectionGraph, id: usize, delta: f64) {
    if let Some(n) = g.nodes.iter_mut().find(|n| n.id == id) {
        n.point.value -= delta;
    }
}

fn lex_key(g: &ConnectionGraph, id: usize) -> (f64, f64) {
    let p = g.node(id).map(|n| n.point.position).unwrap_or_default();
    (p.x, p.y)
}

fn lowest(g: &ConnectionGraph, ids: &[usize], value: impl Fn(usize) -> f64) -> Option<usize> {
    ids.iter().copied().min_by(|&a, &b| {
        value(a)
            .total_cmp(&value(b))
            .then_with(|| lex_key(g, a).partial_cmp(&lex_key(g, b)).unwrap_or(core::cmp::Ordering::Equal))
    })
}

/// Relative width within which two critical values count as tied.
const TIE_TOL: f64 = 1e-9;

/// Picks the lowest source (highest sink when no source exists) and the
/// reachable saddle of least (greatest) value; the orbit count selects the variant.
pub fn pick_cancellation(g: &ConnectionGraph) -> Result<Pick, ReductionError> {
    let saddles = g.saddles();
    let sources = g.sources();
    let mirror = sources.is_empty();
    let extrema = if mirror { g.sinks() } else { sources };
    if saddles.is_empty() || extrema.is_empty() {
        return Err(ReductionError::NoSaddleReachable { node: extrema.first().copied() });
    }
    let s = if mirror { -1.0 } else { 1.0 };
    let val = |id: usize| s * g.value(id).unwrap_or(f64::INFINITY);
    let x = lowest(g, &extrema, val).expect("nonempty");
    let reach: Vec<usize> = saddles.iter().copied().filter(|&y| orbits_between(g, x, y) > 0).collect();
    let y = lowest(g, &reach, val).ok_or(ReductionError::NoSaddleReachable { node: Some(x) })?;
    let vy = val(y);
    let tied = reach.iter().filter(|&&z| z != y && (val(z) - vy).abs() <= TIE_TOL * (1.0 + vy.abs())).count();
    let perturbed = if tied > 0 {
        let mut values: Vec<f64> = g.nodes.iter().map(|n| n.point.value).collect();
        values.sort_by(f64::total_cmp);
        let gap = values
            .windows(2)
            .map(|w| w[1] - w[0])
            .filter(|d| *d > TIE_TOL * (1.0 + values[0].abs()))
            .fold(f64::INFINITY, f64::min);
        let delta = if gap.is_finite() { 0.25 * gap } else { 1e-3 };
        Some((y, s * delta))
    } else {
        None
    };
    let mv = match (mirror, orbits_between(g, x, y)) {
        (false, 1) => ReductionMove::CancelPair { source: x, saddle: y },
        (false, 2) => ReductionMove::TwoOrbitSurgery { source: x, saddle: y },
        (true, 1) => ReductionMove::MirrorCancelPair { sink: x, saddle: y },
        (true, 2) => ReductionMove::MirrorTwoOrbitSurgery { sink: x, saddle: y },
        _ => return Err(ReductionError::InvalidMove { reason: "more than two orbits join the pair" }),
    };
    Ok(Pick { mv, perturbed })
}

/// Removes both nodes of the move; edges that entered the removed nodes are
/// rerouted to `∞` and flagged stale.
pub fn apply_move_graph(g: &ConnectionGraph, mv: ReductionMove) -> Result<ConnectionGraph, ReductionError> {
    let (x, y) = mv.nodes();
    let want_x = if mv.is_mirror() { CriticalKind::Sink } else { CriticalKind::Source };
    if g.kind(x) != Some(want_x) {
        return Err(ReductionError::InvalidMove { reason: "extremum node has the wrong kind" });
    }
    if g.kind(y) != Some(CriticalKind::Saddle) {
        return Err(ReductionError::InvalidMove { reason: "second node is not a saddle" });
    }
    if orbits_between(g, x, y) != mv.required_multiplicity() {
        return Err(ReductionError::InvalidMove { reason: "orbit count does not match the move" });
    }
    let gone = |id: usize| id == x || id == y;
    let mut out = ConnectionGraph { nodes: g.nodes.iter().filter(|n| !gone(n.id)).copied().collect(), edges: Vec::new() };
    for e in &g.edges {
        if gone(e.from) {
            continue;
        }
        match e.to {
            NodeRef::Point(t) if gone(t) => {
                out.add_edge(e.from, NodeRef::Infinity, e.multiplicity);
                mark_stale(&mut out, e.from);
            }
            to => {
                out.add_edge(e.from, to, e.multiplicity);
                if e.stale {
                    if let Some(f) = out.edges.iter_mut().find(|f| f.from == e.from && f.to == to) {
                        f.stale = true;
                    }
                }
            }
        }
    }
    out.sort_edges();
    Ok(out)
}

fn mark_stale(g: &mut ConnectionGraph, from: usize) {
    if let Some(f) = g.edges.iter_mut().find(|f| f.from == from && f.to == NodeRef::Infinity) {
        f.stale = true;
    }
}
