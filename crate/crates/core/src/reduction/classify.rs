//! Homotopy class of a proper gradient field from its degree and a
//! reduction of its connection graph.

use alloc::vec::Vec;

use super::cancel::realize_cancellation;
use super::graph::ConnectionGraph;
use super::moves::{apply_move_graph, pick_cancellation, ReductionMove};
use super::ReductionError;
use crate::field::{properness_evidence, GradientField, PropernessVerdict, Sign};
use crate::flow::{analyze_portrait, find_critical_points, CriticalKind, FlowPortrait, LimitLabel, DEFAULT_DIRECTIONS};
use crate::homotopy::bump_lower;
use crate::invariants::{stabilized_betti, winding_degree, ConleyBetti};
use crate::math::Rect;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassLabel {
    IdClass,
    MinusIdClass,
    NonvanishingClass,
    TheoremViolation(i64),
    Unresolved(i64),
}

impl ClassLabel {
    pub fn name(&self) -> &'static str {
        match self {
            ClassLabel::IdClass => "id",
            ClassLabel::MinusIdClass => "minus_id",
            ClassLabel::NonvanishingClass => "nonvanishing",
            ClassLabel::TheoremViolation(_) => "theorem_violation",
            ClassLabel::Unresolved(_) => "unresolved",
        }
    }

    /// Whether the label is admissible for a field of degree `deg`.
    pub fn admits_degree(&self, deg: i64) -> bool {
        match *self {
            ClassLabel::IdClass | ClassLabel::MinusIdClass => deg == 1,
            ClassLabel::NonvanishingClass => deg == 0,
            ClassLabel::TheoremViolation(k) => k == deg && deg > 1,
            ClassLabel::Unresolved(k) => k == deg && deg < 0,
        }
    }

    /// Betti vector of the class representative's Conley index, where known.
    pub fn canonical_betti(&self) -> Option<ConleyBetti> {
        match self {
            ClassLabel::IdClass => Some(ConleyBetti::new(0, 0, 1)),
            ClassLabel::MinusIdClass => Some(ConleyBetti::new(1, 0, 0)),
            ClassLabel::NonvanishingClass => Some(ConleyBetti::new(0, 0, 0)),
            _ => None,
        }
    }
}

impl core::fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ClassLabel::IdClass => f.write_str("IdClass"),
            ClassLabel::MinusIdClass => f.write_str("MinusIdClass"),
            ClassLabel::NonvanishingClass => f.write_str("NonvanishingClass"),
            ClassLabel::TheoremViolation(k) => write!(f, "TheoremViolation({k})"),
            ClassLabel::Unresolved(k) => write!(f, "Unresolved({k})"),
        }
    }
}

/// One applied move of the reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessStep {
    pub mv: ReductionMove,
    pub extremum_value: f64,
    pub saddle_value: f64,
    /// True when the move was carried out on a potential, false for graph-level moves.
    pub realized: bool,
    /// Winding degree of the realized field after the move.
    pub degree_after: Option<i64>,
    pub t_merge: Option<f64>,
    /// `(saddle, δ)` when a bump lowering broke a tie of saddle values.
    pub tie_break: Option<(usize, f64)>,
    /// Number of edges carrying the stale flag after the move.
    pub stale_edges: usize,
    /// Why a single-orbit move fell back to the graph level.
    pub fallback: Option<ReductionError>,
}

/// A source whose every direction reaches one destination, forcing that destination's uniqueness.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FullCircleWitness {
    pub source: usize,
    pub destination: LimitLabel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub label: ClassLabel,
    pub degree: i64,
    pub witness: Vec<WitnessStep>,
    pub zeros: usize,
    /// Stabilized Conley Betti vector of the input field.
    pub betti: Option<ConleyBetti>,
    /// `betti` equals the label's canonical vector (None when either is unknown).
    pub betti_consistent: Option<bool>,
    pub full_circle: Option<FullCircleWitness>,
    /// The last realized field (the input if no move was realized).
    pub reduced: GradientField,
    pub final_graph: ConnectionGraph,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyOptions {
    pub bbox: Rect,
    pub grid: usize,
    pub directions: usize,
    /// Radius for the winding degree; defaults to twice the box's outer radius.
    pub radius: Option<f64>,
    pub winding_samples: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { bbox: Rect::square(4.0), grid: 32, directions: DEFAULT_DIRECTIONS, radius: None, winding_samples: 256 }
    }
}

fn portrait_of(f: &GradientField, o: &ClassifyOptions) -> Result<FlowPortrait, ReductionError> {
    let search = find_critical_points(f, o.bbox, o.grid, 1e-8)?;
    Ok(analyze_portrait(f, search.points, o.directions)?)
}

fn full_circle(portrait: &FlowPortrait) -> Option<FullCircleWitness> {
    portrait.partitions.iter().find_map(|p| match p.labels.as_slice() {
        [(arc, dest)] if arc.is_full() && p.separatrices.is_empty() && *dest != LimitLabel::Unresolved => {
            Some(FullCircleWitness { source: p.source, destination: *dest })
        }
        _ => None,
    })
}

/// Lowers (for a mirror move, raises) `saddle` by `|δ|`, halving δ until the bump fits.
fn break_tie(f: &GradientField, portrait: &FlowPortrait, saddle: usize, delta: f64) -> Option<GradientField> {
    let (base, sign) = if delta >= 0.0 { (f.clone(), Sign::Plus) } else { (f.negated(), Sign::Minus) };
    let phi = base.effective_potential();
    let zeros: Vec<_> = portrait
        .points
        .iter()
        .map(|p| crate::flow::CriticalPoint::at(&base, p.position))
        .collect();
    let mut d = delta.abs();
    for _ in 0..12 {
        if let Ok((psi, _)) = bump_lower(&phi, portrait.points[saddle].position, d, &zeros) {
            return Some(GradientField::with_sign(psi, sign));
        }
        d *= 0.5;
    }
    None
}

/// Classifies `f` by degree; degrees 0 and 1 are reduced to their
/// canonical representatives by cancellation moves.
pub fn classify(f: &GradientField, o: &ClassifyOptions) -> Result<Classification, ReductionError> {
    let evidence = properness_evidence(f, 100.0, 20, 64);
    if evidence.verdict == PropernessVerdict::NotProper {
        return Err(ReductionError::NotProper);
    }
    let radius = o.radius.unwrap_or(2.0 * o.bbox.outer_radius());
    let degree = winding_degree(f, radius, o.winding_samples)?;
    let portrait = portrait_of(f, o)?;
    let zeros = portrait.points.len();
    let betti = stabilized_betti(f, 1.0 + o.bbox.outer_radius()).ok().map(|(_, _, b)| b);
    let mut out = Classification {
        label: ClassLabel::Unresolved(degree),
        degree,
        witness: Vec::new(),
        zeros,
        betti,
        betti_consistent: None,
        full_circle: None,
        reduced: f.clone(),
        final_graph: portrait.graph.clone(),
    };
    if degree > 1 {
        out.label = ClassLabel::TheoremViolation(degree);
        out.full_circle = full_circle(&portrait);
        return Ok(out);
    }
    if degree < 0 {
        out.label = ClassLabel::Unresolved(degree);
        return Ok(out);
    }
    let mut field = Some((f.clone(), portrait));
    let mut graph = out.final_graph.clone();
    let budget = graph.count_a().min(graph.count_b());
    for _ in 0..budget {
        if graph.count_b() == 0 {
            break;
        }
        let pick = pick_cancellation(&graph)?;
        let (x, y) = pick.mv.nodes();
        let mut step = WitnessStep {
            mv: pick.mv,
            extremum_value: graph.value(x).unwrap_or(f64::NAN),
            saddle_value: graph.value(y).unwrap_or(f64::NAN),
            realized: false,
            degree_after: None,
            t_merge: None,
            tie_break: pick.perturbed,
            stale_edges: 0,
            fallback: None,
        };
        let single = matches!(pick.mv, ReductionMove::CancelPair { .. } | ReductionMove::MirrorCancelPair { .. });
        let mut realized = None;
        if let (true, Some((cur, portrait))) = (single, field.as_ref()) {
            let attempt = match pick.perturbed.and_then(|(s, d)| break_tie(cur, portrait, s, d)) {
                Some(g) => portrait_of(&g, o).map(|p| (g, p)),
                None => Ok((cur.clone(), portrait.clone())),
            }
            .and_then(|(g, p)| {
                let mv = remap(pick.mv, &graph, &p)
                    .ok_or(ReductionError::InvalidMove { reason: "move does not survive the tie break" })?;
                realize_cancellation(&g, &p, mv)
            });
            match attempt {
                Ok(c) => realized = Some(c),
                Err(e) => step.fallback = Some(e),
            }
        }
        match realized {
            Some(c) => {
                let next = c.field_at(1.0);
                let p = portrait_of(&next, o)?;
                step.realized = true;
                step.t_merge = Some(c.t_merge);
                step.degree_after = Some(winding_degree(&next, radius, o.winding_samples)?);
                graph = p.graph.clone();
                out.reduced = next.clone();
                field = Some((next, p));
            }
            None => {
                graph = apply_move_graph(&graph, pick.mv)?;
                field = None;
            }
        }
        step.stale_edges = graph.edges.iter().filter(|e| e.stale).count();
        out.witness.push(step);
    }
    if graph.count_b() != 0 {
        return Err(ReductionError::NoSaddleReachable { node: None });
    }
    out.label = match (degree, graph.nodes.as_slice()) {
        (0, []) => ClassLabel::NonvanishingClass,
        (1, [n]) if n.point.kind == CriticalKind::Source => ClassLabel::IdClass,
        (1, [n]) if n.point.kind == CriticalKind::Sink => ClassLabel::MinusIdClass,
        _ => return Err(ReductionError::CountMismatch { degree, remaining: graph.nodes.len() }),
    };
    out.betti_consistent = out.betti.zip(out.label.canonical_betti()).map(|(a, b)| a == b);
    out.final_graph = graph;
    Ok(out)
}

/// Node ids of a move in a portrait recomputed after a tie break, matched by position.
fn remap(mv: ReductionMove, old: &ConnectionGraph, new: &FlowPortrait) -> Option<ReductionMove> {
    let find = |id: usize| {
        let p = old.node(id)?.point.position;
        new.points.iter().position(|q| q.position.distance(p) < 1e-6)
    };
    let (x, y) = mv.nodes();
    let (x, y) = (find(x)?, find(y)?);
    Some(match mv {
        ReductionMove::CancelPair { .. } => ReductionMove::CancelPair { source: x, saddle: y },
        ReductionMove::TwoOrbitSurgery { .. } => ReductionMove::TwoOrbitSurgery { source: x, saddle: y },
        ReductionMove::MirrorCancelPair { .. } => ReductionMove::MirrorCancelPair { sink: x, saddle: y },
        ReductionMove::MirrorTwoOrbitSurgery { .. } => ReductionMove::MirrorTwoOrbitSurgery { sink: x, saddle: y },
    })
}
