//! One function per subcommand. Each returns the files it produced; the
//! first is the primary document.

use std::path::PathBuf;
use std::time::Instant;

use gradhom_core::field::PropernessVerdict;
use gradhom_core::flow::{analyze_portrait, find_critical_points, newton_refine, CriticalKind, CriticalPoint};
use gradhom_core::homotopy::{
    arctan_diffeotopy, bump_lower, connect_constants, continuity_holds, continuity_modulus, milnor_homotopy,
    pullback_homotopy, radial_push_homotopy, validate, HomotopyFamily, StraightLine, ValidationGrid, ValidationReport,
};
use gradhom_core::reduction::{classify, pick_cancellation, realize_cancellation, ClassLabel, Classification, WitnessStep};
use gradhom_core::{GradientField, ScalarField, Sign, Vec2};
use serde_json::{json, Value};

use crate::analysis::{analyze, dest, graph_json, point_json, report_json, Settings};
use crate::corpus::{aggregate, field_json, run_corpus, run_fields, timing, CorpusSpec};
use crate::error::CliError;
use crate::portrait;
use crate::spec::FieldSpec;

pub const CONSTRUCTORS: &[&str] = &["milnor", "radial_push", "pullback", "straight_line", "constant_connect", "bump", "cancel"];

#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<(String, String)>,
    pub code: i32,
}

impl Outcome {
    fn ok(files: Vec<(String, String)>) -> Self {
        Outcome { files, code: 0 }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn one_input(inputs: &[PathBuf]) -> Result<FieldSpec, CliError> {
    match inputs {
        [p] => Ok(FieldSpec::load(p)?),
        _ => Err(CliError::Usage(format!("expected one --input, got {}", inputs.len()))),
    }
}

fn field_value(spec: &FieldSpec) -> Value {
    serde_json::to_value(spec).expect("field specs serialize")
}

pub fn analyze_cmd(inputs: &[PathBuf], s: &Settings) -> Result<Outcome, CliError> {
    let spec = one_input(inputs)?;
    let a = analyze(&spec.field(), s)?;
    let p = portrait::collect(&a, s.half)?;
    Ok(Outcome::ok(vec![
        ("report.json".into(), pretty(&report_json(&a, field_value(&spec), s))),
        ("trajectories.csv".into(), portrait::csv(&p)),
        ("portrait.svg".into(), portrait::svg(&a, &p, s.half)),
    ]))
}

pub fn portrait_cmd(inputs: &[PathBuf], s: &Settings) -> Result<Outcome, CliError> {
    let spec = one_input(inputs)?;
    let a = analyze(&spec.field(), s)?;
    let p = portrait::collect(&a, s.half)?;
    Ok(Outcome::ok(vec![
        ("portrait.svg".into(), portrait::svg(&a, &p, s.half)),
        ("trajectories.csv".into(), portrait::csv(&p)),
        ("trajectories.json".into(), pretty(&portrait::json(&a, &p))),
    ]))
}

fn step_json(k: usize, w: &WitnessStep) -> Value {
    let (x, y) = w.mv.nodes();
    json!({
        "index": k,
        "move": w.mv.name(),
        "extremum": x,
        "saddle": y,
        "extremum_value": w.extremum_value,
        "saddle_value": w.saddle_value,
        "realized": w.realized,
        "t_merge": w.t_merge,
        "degree_after": w.degree_after,
        "tie_break": w.tie_break.map(|(id, delta)| json!({"saddle": id, "delta": delta})),
        "stale_edges": w.stale_edges,
        "fallback": w.fallback.as_ref().map(|e| e.to_string()),
    })
}

fn label_code(label: ClassLabel) -> i32 {
    match label {
        ClassLabel::Unresolved(_) => 4,
        // Degree above one contradicts the classification: a numerical bug.
        ClassLabel::TheoremViolation(_) => 3,
        _ => 0,
    }
}

fn note(label: ClassLabel) -> Option<&'static str> {
    match label {
        ClassLabel::Unresolved(_) => {
            Some("negative degree: whether such fields are properly gradient homotopic is an open conjecture; no class is asserted")
        }
        ClassLabel::TheoremViolation(_) => Some("proper gradient fields have degree at most 1; this result indicates a numerical failure"),
        _ => None,
    }
}

fn classification_json(spec: &FieldSpec, c: &Classification) -> Value {
    json!({
        "field": field_value(spec),
        "label": c.label.to_string(),
        "degree": c.degree,
        "zeros": c.zeros,
        "witness": c.witness.iter().enumerate().map(|(k, w)| step_json(k, w)).collect::<Vec<_>>(),
        "conley": {
            "betti": c.betti.map(|b| b.as_array()),
            "canonical": c.label.canonical_betti().map(|b| b.as_array()),
            "consistent": c.betti_consistent,
        },
        "full_circle": c.full_circle.map(|w| json!({"source": w.source, "destination": dest(w.destination)})),
        "note": note(c.label),
    })
}

pub fn classify_cmd(inputs: &[PathBuf], s: &Settings) -> Result<Outcome, CliError> {
    let spec = one_input(inputs)?;
    let c = classify(&spec.field(), &s.classify_options())?;
    Ok(Outcome { files: vec![("classification.json".into(), pretty(&classification_json(&spec, &c)))], code: label_code(c.label) })
}

pub fn reduce_cmd(inputs: &[PathBuf], s: &Settings) -> Result<Outcome, CliError> {
    let spec = one_input(inputs)?;
    let f = spec.field();
    let o = s.classify_options();
    let pts = find_critical_points(&f, o.bbox, o.grid, s.tol)?.points;
    let initial = analyze_portrait(&f, pts, o.directions)?;
    let c = classify(&f, &o)?;
    let doc = json!({
        "field": field_value(&spec),
        "label": c.label.to_string(),
        "degree": c.degree,
        "initial_points": initial.points.iter().enumerate().map(|(i, p)| point_json(i, p)).collect::<Vec<_>>(),
        "initial_graph": graph_json(&initial.graph),
        "moves": c.witness.iter().enumerate().map(|(k, w)| step_json(k, w)).collect::<Vec<_>>(),
        "final_graph": graph_json(&c.final_graph),
        "counts": {
            "initial": {"a": initial.graph.count_a(), "b": initial.graph.count_b()},
            "final": {"a": c.final_graph.count_a(), "b": c.final_graph.count_b()},
        },
        "note": note(c.label),
    });
    Ok(Outcome { files: vec![("reduction.json".into(), pretty(&doc))], code: label_code(c.label) })
}

fn verdict(v: PropernessVerdict) -> &'static str {
    match v {
        PropernessVerdict::ProperLikely => "proper_likely",
        PropernessVerdict::NotProper => "not_proper",
        PropernessVerdict::Inconclusive => "inconclusive",
    }
}

fn validation_json(r: &ValidationReport) -> Value {
    json!({
        "gradient_ok": r.gradient_ok,
        "zero_compact_ok": r.zero_compact_ok,
        "proper_ok": verdict(r.proper_ok),
        "endpoint_ok": r.endpoint_ok,
        "worst_cross_partial": r.worst_cross_partial,
        "worst_endpoint": r.worst_endpoint,
        "min_probe_norm": r.min_probe_norm,
    })
}

fn passes(r: &ValidationReport) -> bool {
    r.gradient_ok && r.zero_compact_ok && r.endpoint_ok && r.proper_ok != PropernessVerdict::NotProper
}

fn family_doc<H: HomotopyFamily + ?Sized>(h: &H, grid: &ValidationGrid) -> (Value, bool) {
    let r = validate(h, grid);
    let meta: serde_json::Map<String, Value> = h.metadata().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let ok = passes(&r);
    (json!({"family": h.kind().name(), "exact_gradient": h.exact_gradient(), "validation": validation_json(&r), "metadata": meta}), ok)
}

fn zeros_of(f: &GradientField, s: &Settings) -> Result<Vec<CriticalPoint>, CliError> {
    Ok(find_critical_points(f, s.bbox(), s.grid, s.tol)?.points)
}

fn single_zero(f: &GradientField, s: &Settings) -> Result<Vec2, CliError> {
    match zeros_of(f, s)?.as_slice() {
        [p] => newton_refine(f, p.position, 50).ok_or_else(|| CliError::Numeric("Newton refinement diverged".into())),
        pts => Err(CliError::OutOfTheory(format!("constructor needs exactly one zero in the box, found {}", pts.len()))),
    }
}

fn lowest_saddle_bump(f: &GradientField, s: &Settings) -> Result<(Value, bool), CliError> {
    let pts = zeros_of(f, s)?;
    let (base, sign) = match f.sign {
        Sign::Plus => (f.clone(), Sign::Plus),
        Sign::Minus => (f.negated(), Sign::Minus),
    };
    let phi = base.effective_potential();
    let zeros: Vec<_> = pts.iter().map(|p| CriticalPoint::at(&base, p.position)).collect();
    let saddle = zeros
        .iter()
        .filter(|p| p.kind == CriticalKind::Saddle)
        .min_by(|a, b| a.value.total_cmp(&b.value).then(a.position.x.total_cmp(&b.position.x)))
        .ok_or_else(|| CliError::OutOfTheory("field has no saddle to lower".into()))?;
    let gap = zeros
        .iter()
        .filter(|p| p.position != saddle.position)
        .map(|p| (p.value - saddle.value).abs())
        .fold(1.0, f64::min);
    let mut delta = 0.25 * gap;
    for _ in 0..12 {
        if let Ok((_, path)) = bump_lower(&phi, saddle.position, delta, &zeros) {
            let (mut doc, ok) = family_doc(&path, &ValidationGrid { half_width: s.half, ..ValidationGrid::default() });
            doc["saddle"] = json!([saddle.position.x, saddle.position.y]);
            doc["delta"] = json!(delta);
            doc["negated"] = json!(sign == Sign::Minus);
            return Ok((doc, ok));
        }
        delta *= 0.5;
    }
    Err(CliError::Numeric("no bump radius keeps the critical set".into()))
}

pub fn homotopy_cmd(inputs: &[PathBuf], constructor: &str, s: &Settings) -> Result<Outcome, CliError> {
    let specs = inputs.iter().map(|p| FieldSpec::load(p)).collect::<Result<Vec<_>, _>>()?;
    let two = matches!(constructor, "straight_line" | "constant_connect");
    let want = if two { 2 } else { 1 };
    if specs.len() != want {
        return Err(CliError::Usage(format!("constructor {constructor} takes {want} --input, got {}", specs.len())));
    }
    let f = specs[0].field();
    let grid = ValidationGrid { half_width: s.half, ..ValidationGrid::default() };
    let (mut doc, ok) = match constructor {
        "milnor" => {
            let p = single_zero(&f, s)?;
            let fam = milnor_homotopy(&f, p, 1.0)?;
            let (mut doc, ok) = family_doc(&fam, &grid);
            let c = &fam.constants;
            let ts = [1e-2, 1e-3, 1e-4];
            let modulus = continuity_modulus(&fam, &ts, s.half, 41);
            let continuous = continuity_holds(&modulus);
            doc["zero"] = json!([p.x, p.y]);
            doc["constants"] = json!({
                "m": c.m, "epsilon": c.epsilon, "delta1": c.delta1, "m1": c.m1, "delta2": c.delta2,
                "t1": c.t1, "l": c.l, "sampled_min": c.sampled_min, "bound_holds": c.bound_holds(),
            });
            doc["continuity"] = json!({"t": ts, "modulus": modulus, "holds": continuous});
            (doc, ok && c.bound_holds() && continuous)
        }
        "radial_push" => {
            let h = radial_push_homotopy(&f)?;
            let (mut doc, ok) = family_doc(&h, &grid);
            let q = h.check_inequalities(s.half, 41, 11);
            doc["c"] = json!(h.c);
            doc["inequalities"] = json!({
                "radial_growth": q.radial_growth, "jacobian_floor": q.jacobian_floor,
                "pushed_floor": q.pushed_floor, "compact_floor": q.compact_floor, "worst": q.worst(),
            });
            (doc, ok && q.worst() >= -1e-10)
        }
        "pullback" => {
            let r = s.degree_radius();
            let base = f.effective_potential();
            let zeros = zeros_of(&f, s)?;
            let fam = pullback_homotopy(&base, arctan_diffeotopy(r), &zeros)?;
            let (mut doc, ok) = family_doc(&fam, &grid);
            doc["r"] = json!(r);
            (doc, ok)
        }
        "straight_line" => family_doc(&StraightLine { f0: f, f1: specs[1].field() }, &grid),
        "constant_connect" => {
            let (c0, c1) = (f.gradient(Vec2::ZERO), specs[1].field().gradient(Vec2::ZERO));
            let g = connect_constants(c0, c1)?;
            family_doc(&g, &grid)
        }
        "bump" => lowest_saddle_bump(&f, s)?,
        "cancel" => {
            let pts = zeros_of(&f, s)?;
            let portrait = analyze_portrait(&f, pts, s.samples)?;
            let pick = pick_cancellation(&portrait.graph)?;
            let c = realize_cancellation(&f, &portrait, pick.mv)?;
            let ok = passes(&c.validation);
            let (x, y) = pick.mv.nodes();
            (
                json!({
                    "family": "cancel_path",
                    "move": {"move": pick.mv.name(), "extremum": x, "saddle": y},
                    "b_eff": c.b_eff,
                    "c_max": c.c_max,
                    "t_merge": c.t_merge,
                    "counts": c.counts.iter().map(|&(t, n)| json!({"t": t, "zeros": n})).collect::<Vec<_>>(),
                    "validation": validation_json(&c.validation),
                }),
                ok,
            )
        }
        other => {
            return Err(CliError::Usage(format!("unknown constructor {other}; expected one of {}", CONSTRUCTORS.join(", "))))
        }
    };
    doc["constructor"] = json!(constructor);
    doc["passed"] = json!(ok);
    Ok(Outcome { files: vec![("validation.json".into(), pretty(&doc))], code: if ok { 0 } else { 3 } })
}

pub fn corpus_cmd(inputs: &[PathBuf], count: usize, s: &Settings) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let results = if inputs.is_empty() {
        run_corpus(&CorpusSpec { count, ..CorpusSpec::default() }, s)
    } else {
        let specs = inputs.iter().map(|p| FieldSpec::load(p)).collect::<Result<Vec<_>, _>>()?;
        run_fields(specs, s)
    };
    let total = start.elapsed().as_secs_f64();
    let mut agg = aggregate(&results);
    agg["seed"] = json!(s.seed);
    let bad = agg["total_violations"].as_u64().unwrap_or(0) > 0 || agg["degree_above_one"].as_u64().unwrap_or(0) > 0;
    let fields = Value::Array(results.iter().map(field_json).collect());
    Ok(Outcome {
        files: vec![
            ("aggregate.json".into(), pretty(&agg)),
            ("fields.json".into(), pretty(&fields)),
            ("timing.json".into(), pretty(&timing(&results, total))),
        ],
        code: if bad { 3 } else { 0 },
    })
}
