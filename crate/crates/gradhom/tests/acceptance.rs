//! One pass/fail line per acceptance criterion. Runs without the libtest
//! harness so the lines always print; exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use gradhom::corpus::{aggregate, default_settings, run_corpus, CorpusSpec};
use gradhom::FieldSpec;
use gradhom_core::flow::{analyze_portrait, find_critical_points, newton_refine, CriticalKind, DEFAULT_DIRECTIONS};
use gradhom_core::homotopy::{
    arctan_diffeotopy, bump_lower, continuity_holds, continuity_modulus, milnor_homotopy, radial_push_homotopy,
    square_extension, validate, ConstProfile, FnProfile, ValidationGrid, ENDPOINT_TOL,
};
use gradhom_core::invariants::{
    conley_obstruction, degree_report, stabilized_betti, ConleyBetti, ExitStructure, Obstruction,
};
use gradhom_core::math::{Rect, Vec2, TAU};
use gradhom_core::reduction::{
    classify, pick_cancellation, realize_cancellation, ClassLabel, ClassifyOptions, ReductionMove, MERGE_WINDOW,
};
use gradhom_core::{GradientField, Potential, PotentialTerm, ScalarField};
use serde_json::Value;

const FIXTURES: [&str; 3] = ["degree_suite.json", "double_well_axes.json", "exit_betti.json"];

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn fixture(name: &str) -> Result<Value, String> {
    let text = std::fs::read_to_string(fixture_dir().join(name)).map_err(|e| format!("{name}: {e}"))?;
    serde_json::from_str(&text).map_err(|e| format!("{name}: {e}"))
}

/// `(name, field, box half-width, winding radius, degree)`.
type SuiteEntry = (String, GradientField, f64, f64, i64);

fn suite() -> Result<Vec<SuiteEntry>, String> {
    let data = fixture("degree_suite.json")?;
    let fields = data["fields"].as_array().ok_or("degree suite has no fields")?;
    fields
        .iter()
        .map(|e| {
            let spec: FieldSpec = serde_json::from_value(e["spec"].clone()).map_err(|err| err.to_string())?;
            Ok((
                e["name"].as_str().unwrap_or("?").to_string(),
                spec.field(),
                e["box"].as_f64().ok_or("box")?,
                e["radius"].as_f64().ok_or("radius")?,
                e["degree"].as_i64().ok_or("degree")?,
            ))
        })
        .collect()
}

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<f64, String> {
    let s = start.elapsed().as_secs_f64();
    ensure(start.elapsed() < limit, || format!("took {s:.1} s, limit {} s", limit.as_secs()))?;
    Ok(s)
}

fn degree_agreement() -> Check {
    let start = Instant::now();
    let mut n = 0;
    for (name, f, half, radius, want) in suite()? {
        let pts = find_critical_points(&f, Rect::square(half), 40, 1e-8).map_err(|e| format!("{name}: {e}"))?.points;
        if pts.iter().any(|p| p.kind == CriticalKind::Degenerate) {
            continue;
        }
        let r = degree_report(&f, &pts, radius).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            (r.winding, r.hessian_sum, r.morse_count) == (want, Some(want), Some(want)),
            || format!("{name}: {r:?}, oracle {want}"),
        )?;
        n += 1;
    }
    ensure(n >= 10, || format!("only {n} generic fields"))?;
    let s = within(start, Duration::from_secs(5))?;
    Ok(format!("{n} generic fields agree on all three methods ({s:.2} s)"))
}

fn conley() -> Check {
    let id = stabilized_betti(&GradientField::identity(), 1.0).map_err(|e| e.to_string())?;
    let mid = stabilized_betti(&GradientField::minus_identity(), 1.0).map_err(|e| e.to_string())?;
    ensure(id.1.structure == ExitStructure::Full && id.2 == ConleyBetti::new(0, 0, 1), || format!("id: {:?}", id.2))?;
    ensure(mid.1.structure == ExitStructure::Empty && mid.2 == ConleyBetti::new(1, 0, 0), || format!("-id: {:?}", mid.2))?;
    let ob = conley_obstruction(&GradientField::identity(), &GradientField::minus_identity());
    ensure(ob == Ok(Obstruction::Obstructed), || format!("obstruction {ob:?}"))?;
    let mut n = 0;
    for (name, f, _, radius, want) in suite()? {
        let (_, _, b) = stabilized_betti(&f, radius).map_err(|e| format!("{name}: {e}"))?;
        ensure(b.euler() == want, || format!("{name}: euler {} vs degree {want}", b.euler()))?;
        n += 1;
    }
    Ok(format!("id -> (0,0,1), -id -> (1,0,0), obstructed; Euler identity on {n} fields"))
}

fn double_well_reduction() -> Check {
    let start = Instant::now();
    let o = ClassifyOptions::default();
    let dw = GradientField::new(Potential::double_well());
    let c = classify(&dw, &o).map_err(|e| e.to_string())?;
    ensure(c.label == ClassLabel::IdClass, || format!("double well: {}", c.label))?;
    ensure(c.witness.len() == 1 && matches!(c.witness[0].mv, ReductionMove::CancelPair { .. }), || {
        format!("moves {:?}", c.witness.iter().map(|w| w.mv).collect::<Vec<_>>())
    })?;
    let neg = classify(&dw.negated(), &o).map_err(|e| e.to_string())?;
    ensure(neg.label == ClassLabel::MinusIdClass, || format!("negated double well: {}", neg.label))?;

    let pts = find_critical_points(&dw, o.bbox, o.grid, 1e-8).map_err(|e| e.to_string())?.points;
    let portrait = analyze_portrait(&dw, pts, DEFAULT_DIRECTIONS).map_err(|e| e.to_string())?;
    let pick = pick_cancellation(&portrait.graph).map_err(|e| e.to_string())?;
    let cancel = realize_cancellation(&dw, &portrait, pick.mv).map_err(|e| e.to_string())?;
    let first = cancel.counts.first().map(|c| c.1);
    let last = cancel.counts.last().map(|c| c.1);
    ensure(first == Some(3) && last == Some(1), || format!("counts {:?}", cancel.counts))?;
    let tm = cancel.t_merge;
    ensure((tm - 0.5).abs() <= MERGE_WINDOW, || format!("merge at t = {tm}"))?;
    // Just before the merge the colliding pair has nearly singular Hessians.
    let wide = Rect::new(Vec2::new(-3.0, -12.0), Vec2::new(12.0, 12.0));
    let dets = |t: f64| -> Result<Vec<f64>, String> {
        let pts = find_critical_points(&cancel.field_at(t), wide, 60, 1e-9).map_err(|e| e.to_string())?.points;
        Ok(pts.iter().map(|p| p.hessian.det().abs()).collect())
    };
    let near = dets(tm - 1e-3)?;
    let base = dets(0.0)?;
    let floor = base.iter().copied().fold(f64::INFINITY, f64::min);
    let pinch = near.iter().copied().fold(f64::INFINITY, f64::min);
    ensure(near.len() == 3 && pinch < 0.1 * floor, || format!("no degenerate transition: {near:?} vs {base:?}"))?;
    ensure(dets(tm + 1e-3)?.len() == 1, || "pair survives the merge".into())?;
    let s = within(start, Duration::from_secs(30))?;
    Ok(format!("IdClass by one cancel_pair, MinusIdClass mirrored, 3 -> 1 zeros at t = {tm:.4} ({s:.1} s)"))
}

fn nonvanishing() -> Check {
    let o = ClassifyOptions::default();
    let mut worst = f64::INFINITY;
    for c in [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)] {
        let f = GradientField::new(Potential::linear(c));
        let got = classify(&f, &o).map_err(|e| e.to_string())?;
        ensure(got.label == ClassLabel::NonvanishingClass, || format!("{c:?}: {}", got.label))?;
        let h = radial_push_homotopy(&f).map_err(|e| e.to_string())?;
        let q = h.check_inequalities(3.0, 41, 11);
        worst = worst.min(q.worst());
    }
    ensure(worst >= -1e-10, || format!("worst slack {worst:e}"))?;
    Ok(format!("grad x and grad y are NonvanishingClass; worst push slack {worst:e}"))
}

fn corpus_sweep() -> Check {
    let start = Instant::now();
    let results = run_corpus(&CorpusSpec::default(), &default_settings());
    let a = aggregate(&results);
    let ok = a["status"]["ok"].as_u64().unwrap_or(0);
    ensure(results.len() == 50 && ok == 50, || format!("status {}", a["status"]))?;
    let max = a["max_degree"].as_i64().ok_or("no degree")?;
    ensure(max <= 1, || format!("max degree {max}"))?;
    let v = &a["lemma_violations"];
    for k in ["openness", "key", "height"] {
        ensure(v[k].as_u64() == Some(0), || format!("{k} violations: {}", v[k]))?;
    }
    ensure(a["total_violations"].as_u64() == Some(0), || format!("violations {v}"))?;
    let s = within(start, Duration::from_secs(600))?;
    let ch = &a["lemma_checked"];
    Ok(format!(
        "50 fields, max degree {max}, 0 violations (openness {}, key {}, height {} checked) ({s:.1} s)",
        ch["openness"], ch["key"], ch["height"]
    ))
}

fn constructions() -> Check {
    let quartic = GradientField::new(Potential::new(vec![PotentialTerm::radial(1.0, 2), PotentialTerm::monomial(1.0, 1, 0)]));
    let fields = [
        (GradientField::identity(), Vec2::ZERO),
        (GradientField::minus_identity(), Vec2::ZERO),
        (GradientField::new(Potential::saddle()), Vec2::ZERO),
        (GradientField::identity().with_offset(Vec2::new(1.0, -2.0)), Vec2::new(-1.0, 2.0)),
        (quartic, Vec2::new(-(0.25f64).cbrt(), 0.0)),
    ];
    let mut worst_end = 0.0f64;
    for (k, (f, p)) in fields.iter().enumerate() {
        let p = newton_refine(f, *p, 50).ok_or(format!("field {k}: Newton failed"))?;
        let fam = milnor_homotopy(f, p, 1.0).map_err(|e| format!("field {k}: {e}"))?;
        let rep = validate(&fam, &ValidationGrid::default());
        ensure(rep.worst_endpoint < ENDPOINT_TOL, || format!("field {k}: endpoint {:e}", rep.worst_endpoint))?;
        let m = continuity_modulus(&fam, &[1e-2, 1e-3, 1e-4], 3.0, 41);
        ensure(continuity_holds(&m), || format!("field {k}: modulus {m:?}"))?;
        worst_end = worst_end.max(rep.worst_endpoint);
    }

    let th = arctan_diffeotopy(1.0);
    ensure((th.mu(1.0) - 0.5).abs() < 1e-12, || format!("mu(1) = {}", th.mu(1.0)))?;
    for k in 0..400 {
        let x = Vec2::polar(0.05 * k as f64 + 1e4 * (k % 5) as f64, 0.41 * k as f64);
        ensure(th.apply(1.0, x).norm() < 1.0, || format!("image of {x:?} leaves the disc"))?;
    }

    let trivial = square_extension(ConstProfile(1.0), ConstProfile(1.0)).map_err(|e| e.to_string())?;
    for i in 0..200 {
        for j in 0..200 {
            let (x, y) = ((i as f64 + 0.5) / 200.0, (j as f64 + 0.5) / 200.0);
            ensure(trivial.value(x, y) == y, || format!("trivial case differs at ({x}, {y})"))?;
        }
    }
    let steep = square_extension(ConstProfile(2.0), ConstProfile(0.5)).map_err(|e| e.to_string())?;
    let wavy = square_extension(
        FnProfile { value: |x: f64| 1.0 + 0.8 * (TAU * x).sin(), slope: |x: f64| 0.8 * TAU * (TAU * x).cos() },
        FnProfile { value: |x: f64| 3.0 - 2.5 * x, slope: |_| -2.5 },
    )
    .map_err(|e| e.to_string())?;
    let dys = [trivial.min_dy(200), steep.min_dy(200), wavy.min_dy(200)];
    ensure(dys.iter().all(|&d| d > 0.0), || format!("min dpsi/dy {dys:?}"))?;

    let phi = Potential::double_well();
    let f = GradientField::new(phi.clone());
    let bbox = Rect::square(3.0);
    let before = find_critical_points(&f, bbox, 24, 1e-8).map_err(|e| e.to_string())?.points;
    let (psi, _) = bump_lower(&phi, Vec2::ZERO, 0.01, &before).map_err(|e| e.to_string())?;
    let g = GradientField::new(psi);
    let after = find_critical_points(&g, bbox, 24, 1e-8).map_err(|e| e.to_string())?.points;
    ensure(after.len() == before.len(), || format!("{} zeros after the bump", after.len()))?;
    let mut drift = 0.0f64;
    for (a, b) in after.iter().zip(&before) {
        drift = drift.max(a.position.distance(b.position));
        let dv = g.value(a.position) - b.value;
        let want = if b.kind == CriticalKind::Saddle { -0.01 } else { 0.0 };
        ensure((dv - want).abs() < 1e-12, || format!("value change {dv} at {:?}", b.position))?;
    }
    ensure(drift < 1e-6, || format!("drift {drift:e}"))?;
    Ok(format!(
        "Milnor endpoint {worst_end:e} on 5 fields, mu(1) = 0.5, square min dpsi/dy {:.3}, bump drift {drift:e}",
        dys.iter().copied().fold(f64::INFINITY, f64::min)
    ))
}

fn fixtures_exist() -> Check {
    for name in FIXTURES {
        fixture(name)?;
    }
    Ok(format!("{} oracle fixtures present and parse", FIXTURES.len()))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("degree agreement", degree_agreement),
        ("Conley vectors and Euler identity", conley),
        ("double-well reduction", double_well_reduction),
        ("nonvanishing class and radial push", nonvanishing),
        ("corpus sweep", corpus_sweep),
        ("explicit constructions", constructions),
        ("oracle fixtures", fixtures_exist),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why}", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
