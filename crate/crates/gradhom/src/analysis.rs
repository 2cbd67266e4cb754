//! The per-field pipeline shared by `analyze`, `portrait` and `corpus`.

use gradhom_core::field::{properness_evidence, PropernessVerdict};
use gradhom_core::flow::lemmas::{check_lemmas, LemmaReport};
use gradhom_core::flow::{
    analyze_portrait, find_critical_points, genericity_violations, CriticalKind, CriticalPoint, FlowAnalyzer,
    FlowError, FlowPortrait, GenericityViolation, IntegrationCaps, LimitLabel, DEFAULT_DIRECTIONS,
};
use gradhom_core::invariants::{degree_report, stabilized_betti, ConleyBetti, DegreeReport, ExitSet, ExitStructure};
use gradhom_core::reduction::{ClassifyOptions, ConnectionGraph, NodeRef};
use gradhom_core::{GradientField, Rect};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;

/// Numerical knobs shared by every command.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    /// Half-width of the square searched for zeros.
    pub half: f64,
    pub grid: usize,
    /// Winding radius; twice the box's outer radius when absent.
    pub radius: Option<f64>,
    /// Launch directions per source.
    pub samples: usize,
    pub seed: u64,
    /// Boundary tolerance of the zero search.
    pub tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { half: 4.0, grid: 32, radius: None, samples: DEFAULT_DIRECTIONS, seed: 42, tol: 1e-8 }
    }
}

impl Settings {
    pub fn check(&self) -> Result<(), CliError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.half) || !positive(self.tol) || self.radius.is_some_and(|r| !positive(r)) {
            return Err(CliError::Usage("box, radius and tol must be positive".into()));
        }
        if self.grid < 2 || self.samples < 8 {
            return Err(CliError::Usage("grid must be at least 2 and samples at least 8".into()));
        }
        Ok(())
    }

    pub fn bbox(&self) -> Rect {
        Rect::square(self.half)
    }

    pub fn degree_radius(&self) -> f64 {
        self.radius.unwrap_or(2.0 * self.bbox().outer_radius())
    }

    pub fn exit_radius(&self) -> f64 {
        1.0 + self.bbox().outer_radius()
    }

    pub fn classify_options(&self) -> ClassifyOptions {
        ClassifyOptions {
            bbox: self.bbox(),
            grid: self.grid,
            directions: self.samples,
            radius: self.radius,
            ..ClassifyOptions::default()
        }
    }
}

pub struct Analysis {
    pub field: GradientField,
    pub points: Vec<CriticalPoint>,
    /// Absent when a degenerate zero prevents the flow analysis.
    pub portrait: Option<FlowPortrait>,
    pub degree: DegreeReport,
    pub exit: ExitSet,
    pub betti: ConleyBetti,
    pub violations: Vec<GenericityViolation>,
    pub properness: PropernessVerdict,
    pub lemmas: Option<LemmaReport>,
}

pub fn analyze(f: &GradientField, s: &Settings) -> Result<Analysis, CliError> {
    let properness = properness_evidence(f, 100.0, 20, 64).verdict;
    if properness == PropernessVerdict::NotProper {
        return Err(CliError::OutOfTheory("field is not proper".into()));
    }
    let points = find_critical_points(f, s.bbox(), s.grid, s.tol)?.points;
    let degree = degree_report(f, &points, s.degree_radius())?;
    let (_, exit, betti) = stabilized_betti(f, s.exit_radius())?;
    let mut violations: Vec<GenericityViolation> = points
        .iter()
        .enumerate()
        .filter(|(_, p)| p.kind == CriticalKind::Degenerate)
        .map(|(index, _)| GenericityViolation::DegenerateZero { index })
        .collect();
    let portrait = match analyze_portrait(f, points.clone(), s.samples) {
        Ok(p) => Some(p),
        Err(FlowError::DegenerateZero { .. }) if !violations.is_empty() => None,
        Err(e) => return Err(e.into()),
    };
    let mut lemmas = None;
    if let Some(p) = &portrait {
        let an = FlowAnalyzer::new(f, p.points.clone(), IntegrationCaps::with_escape(p.escape_radius));
        violations.extend(genericity_violations(&an, &p.manifolds));
        lemmas = Some(check_lemmas(f, p, Some(degree.winding))?);
    }
    Ok(Analysis { field: f.clone(), points, portrait, degree, exit, betti, violations, properness, lemmas })
}

pub fn dest(l: LimitLabel) -> Value {
    match l {
        LimitLabel::AtCritical(i) => json!(i),
        LimitLabel::AtInfinity => json!("inf"),
        LimitLabel::Unresolved => json!("unresolved"),
    }
}

pub fn node(n: NodeRef) -> Value {
    match n {
        NodeRef::Point(i) => json!(i),
        NodeRef::Infinity => json!("inf"),
    }
}

fn exit_kind(e: &ExitStructure) -> &'static str {
    match e {
        ExitStructure::Empty => "empty",
        ExitStructure::Full => "full",
        ExitStructure::Arcs(_) => "arcs",
    }
}

fn properness_name(v: PropernessVerdict) -> &'static str {
    match v {
        PropernessVerdict::ProperLikely => "proper_likely",
        PropernessVerdict::NotProper => "not_proper",
        PropernessVerdict::Inconclusive => "inconclusive",
    }
}

#[derive(Serialize)]
pub struct ExitDto {
    pub kind: &'static str,
    pub m: usize,
}

/// The invariants block of a report.
#[derive(Serialize)]
pub struct Invariants {
    pub winding: i64,
    pub hessian_sum: Option<i64>,
    pub morse_count: Option<i64>,
    pub exit: ExitDto,
    pub betti: [u32; 3],
}

pub fn invariants(a: &Analysis) -> Invariants {
    Invariants {
        winding: a.degree.winding,
        hessian_sum: a.degree.hessian_sum,
        morse_count: a.degree.morse_count,
        exit: ExitDto { kind: exit_kind(&a.exit.structure), m: a.exit.structure.arc_count() },
        betti: a.betti.as_array(),
    }
}

pub fn point_json(id: usize, p: &CriticalPoint) -> Value {
    json!({
        "id": id,
        "x": p.position.x,
        "y": p.position.y,
        "kind": p.kind.name(),
        "value": p.value,
        "hessian": [p.hessian.xx, p.hessian.xy, p.hessian.yy],
    })
}

pub fn graph_json(g: &ConnectionGraph) -> Value {
    json!({
        "nodes": g.nodes.iter().map(|n| json!({"id": n.id, "kind": n.point.kind.name(), "value": n.point.value})).collect::<Vec<_>>(),
        "edges": g.edges.iter().map(|e| json!({
            "from": e.from, "to": node(e.to), "multiplicity": e.multiplicity, "stale": e.stale,
        })).collect::<Vec<_>>(),
    })
}

pub fn partitions_json(p: &FlowPortrait) -> Value {
    Value::Array(
        p.partitions
            .iter()
            .map(|d| {
                json!({
                    "source": d.source,
                    "arcs": d.labels.iter().map(|(a, l)| json!({"start": a.start, "length": a.length, "destination": dest(*l)})).collect::<Vec<_>>(),
                    "separatrices": d.separatrices.iter().map(|s| json!({"angle": s.angle, "destination": dest(s.destination)})).collect::<Vec<_>>(),
                    "unresolved": d.unresolved,
                })
            })
            .collect(),
    )
}

pub fn violation_json(v: &GenericityViolation) -> Value {
    match *v {
        GenericityViolation::DegenerateZero { index } => json!({"type": "degenerate_zero", "index": index}),
        GenericityViolation::SaddleConnection { from, to, distance } => {
            json!({"type": "saddle_connection", "from": from, "to": to, "distance": distance})
        }
        GenericityViolation::BoundaryZero { min_norm } => json!({"type": "boundary_zero", "min_norm": min_norm}),
        GenericityViolation::IntegrationFailed => json!({"type": "integration_failed"}),
    }
}

pub fn lemmas_json(r: &LemmaReport) -> Value {
    json!({
        "lyapunov_violations": r.lyapunov_violations,
        "openness_violations": r.openness_violations,
        "openness_checked": r.openness_checked,
        "uniqueness_violations": r.uniqueness_violations,
        "key_violations": r.key_violations,
        "key_checked": r.key_checked,
        "height_violations": r.height_violations,
        "height_checked": r.height_checked,
        "degree_graph_ok": r.degree_graph_ok,
    })
}

pub fn report_json(a: &Analysis, field: Value, s: &Settings) -> Value {
    json!({
        "field": field,
        "settings": {"box": s.half, "grid": s.grid, "radius": s.degree_radius(), "samples": s.samples, "tol": s.tol},
        "invariants": invariants(a),
        "degree_consistent": a.degree.consistent,
        "exit_radius": a.exit.radius,
        "exit_arcs": a.exit.arcs.iter().map(|arc| json!({"start": arc.start, "length": arc.length})).collect::<Vec<_>>(),
        "euler_matches_degree": a.betti.euler() == a.degree.winding,
        "properness": properness_name(a.properness),
        "critical_points": a.points.iter().enumerate().map(|(i, p)| point_json(i, p)).collect::<Vec<_>>(),
        "genericity": {
            "generic": a.violations.is_empty(),
            "violations": a.violations.iter().map(violation_json).collect::<Vec<_>>(),
        },
        "graph": a.portrait.as_ref().map(|p| graph_json(&p.graph)),
        "partitions": a.portrait.as_ref().map(partitions_json),
        "lemmas": a.lemmas.as_ref().map(lemmas_json),
    })
}
