//! Connection graph assembly and genericity checks.

use alloc::vec::Vec;

use super::analyzer::{FlowAnalyzer, IntegrationCaps, LimitLabel};
use super::critical::{find_critical_points, CriticalKind, CriticalPoint};
use super::partition::{DirectionPartition, SaddleManifolds};
use super::FlowError;
use crate::field::ScalarField;
use crate::invariants::{stabilize_radius, ExitStructure};
use crate::math::Rect;
use crate::reduction::{ConnectionGraph, NodeRef};

/// Launch directions per source used by default.
pub const DEFAULT_DIRECTIONS: usize = 64;
/// Closest approach below which a saddle branch counts as hitting another saddle.
pub const SADDLE_CONNECTION_TOL: f64 = 1e-4;

/// Escape radius for orbit integration: twice the radius at which the
/// boundary exit set stabilizes as fully outward, else a multiple of the
/// extent of the zero set.
pub fn default_escape_radius<F: ScalarField + ?Sized>(f: &F, points: &[CriticalPoint]) -> f64 {
    let extent = points.iter().map(|p| p.position.norm()).fold(0.0, f64::max);
    let r0 = 1.0 + extent;
    match stabilize_radius(f, r0) {
        Ok((r, e)) if e.structure == ExitStructure::Full => (2.0 * r).max(4.0 * r0),
        _ => 8.0 * r0,
    }
}

/// Everything the flow tells about a field's zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowPortrait {
    pub points: Vec<CriticalPoint>,
    pub escape_radius: f64,
    pub partitions: Vec<DirectionPartition>,
    pub manifolds: Vec<SaddleManifolds>,
    pub graph: ConnectionGraph,
}

/// Integrates saddle branches and source partitions for known zeros.
pub fn analyze_portrait<F: ScalarField + ?Sized>(
    f: &F,
    points: Vec<CriticalPoint>,
    n0: usize,
) -> Result<FlowPortrait, FlowError> {
    if let Some(p) = points.iter().find(|p| p.kind == CriticalKind::Degenerate) {
        return Err(FlowError::DegenerateZero { x: p.position.x, y: p.position.y });
    }
    let escape_radius = default_escape_radius(f, &points);
    let an = FlowAnalyzer::new(f, points, IntegrationCaps::with_escape(escape_radius));
    let manifolds = an.all_saddle_manifolds()?;
    let partitions = an
        .indices_of(CriticalKind::Source)
        .map(|x| an.direction_partition_with(x, n0, &manifolds))
        .collect::<Result<Vec<_>, _>>()?;
    let mut graph = ConnectionGraph::from_points(&an.points);
    for p in &partitions {
        for dest in p.destinations() {
            if let Some(to) = node_of(dest) {
                graph.add_edge(p.source, to, p.multiplicity(dest) as u32);
            }
        }
    }
    for m in &manifolds {
        for br in &m.unstable {
            let dest = br.forward_limit;
            let ok = match dest {
                LimitLabel::AtCritical(i) => an.points[i].kind == CriticalKind::Sink,
                LimitLabel::AtInfinity => true,
                LimitLabel::Unresolved => false,
            };
            if ok {
                graph.add_edge(m.saddle, node_of(dest).unwrap_or(NodeRef::Infinity), 1);
            }
        }
    }
    graph.sort_edges();
    Ok(FlowPortrait { points: an.points, escape_radius, partitions, manifolds, graph })
}

fn node_of(l: LimitLabel) -> Option<NodeRef> {
    match l {
        LimitLabel::AtCritical(i) => Some(NodeRef::Point(i)),
        LimitLabel::AtInfinity => Some(NodeRef::Infinity),
        LimitLabel::Unresolved => None,
    }
}

/// Finds the zeros of `f` in `bbox` and assembles the connection graph.
pub fn connection_graph<F: ScalarField + ?Sized>(f: &F, bbox: Rect, grid: usize) -> Result<ConnectionGraph, FlowError> {
    let search = find_critical_points(f, bbox, grid, 1e-8)?;
    Ok(analyze_portrait(f, search.points, DEFAULT_DIRECTIONS)?.graph)
}

#[derive(Clone, Debug, PartialEq)]
pub enum GenericityViolation {
    DegenerateZero { index: usize },
    /// A branch of saddle `from` passes within `distance` of saddle `to`.
    SaddleConnection { from: usize, to: usize, distance: f64 },
    BoundaryZero { min_norm: f64 },
    IntegrationFailed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenericityReport {
    pub generic: bool,
    pub points: Vec<CriticalPoint>,
    pub violations: Vec<GenericityViolation>,
}

/// Saddle–saddle near-connections among precomputed branches.
pub fn genericity_violations<F: ScalarField + ?Sized>(
    an: &FlowAnalyzer<'_, F>,
    manifolds: &[SaddleManifolds],
) -> Vec<GenericityViolation> {
    let mut out = Vec::new();
    for m in manifolds {
        for br in &m.unstable {
            for k in an.indices_of(CriticalKind::Saddle).filter(|&k| k != m.saddle) {
                if br.closest[k] < SADDLE_CONNECTION_TOL {
                    out.push(GenericityViolation::SaddleConnection { from: m.saddle, to: k, distance: br.closest[k] });
                }
            }
        }
    }
    out
}

/// Zeros nondegenerate and no saddle branch reaching another saddle.
pub fn check_generic<F: ScalarField + ?Sized>(f: &F, bbox: Rect, grid: usize) -> GenericityReport {
    let search = match find_critical_points(f, bbox, grid, 1e-8) {
        Ok(s) => s,
        Err(FlowError::BoundaryZero { min_norm }) => {
            return GenericityReport {
                generic: false,
                points: Vec::new(),
                violations: alloc::vec![GenericityViolation::BoundaryZero { min_norm }],
            }
        }
        Err(_) => {
            return GenericityReport {
                generic: false,
                points: Vec::new(),
                violations: alloc::vec![GenericityViolation::IntegrationFailed],
            }
        }
    };
    let points = search.points;
    let mut violations: Vec<GenericityViolation> = points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.kind == CriticalKind::Degenerate)
        .map(|(index, _)| GenericityViolation::DegenerateZero { index })
        .collect();
    if violations.is_empty() {
        let an = FlowAnalyzer::new(f, points.clone(), IntegrationCaps::with_escape(default_escape_radius(f, &points)));
        match an.all_saddle_manifolds() {
            Ok(m) => violations.extend(genericity_violations(&an, &m)),
            Err(_) => violations.push(GenericityViolation::IntegrationFailed),
        }
    }
    GenericityReport { generic: violations.is_empty(), points, violations }
}
