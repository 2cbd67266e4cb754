//! Comparisons against the frozen outputs of `tests/oracles/generate.py`.

mod common;

use common::{field_of, fixture};
use gradhom_core::flow::{
    analyze_portrait, find_critical_points, CriticalKind, Direction, FlowAnalyzer, IntegrationCaps, LimitLabel,
    DEFAULT_DIRECTIONS,
};
use gradhom_core::invariants::{conley_betti, hessian_sum_degree, morse_count_degree, winding_degree, ExitStructure};
use gradhom_core::math::{wrap_pi, Rect, Vec2};
use gradhom_core::{GradientField, Potential};

fn kind_name(k: CriticalKind) -> &'static str {
    match k {
        CriticalKind::Source => "source",
        CriticalKind::Sink => "sink",
        CriticalKind::Saddle => "saddle",
        CriticalKind::Degenerate => "degenerate",
    }
}

#[test]
fn degree_suite_matches_dense_winding_oracle() {
    let suite = fixture("degree_suite.json");
    let fields = suite["fields"].as_array().unwrap();
    assert!(fields.len() >= 10);
    for entry in fields {
        let name = entry["name"].as_str().unwrap();
        let f = field_of(&entry["spec"]);
        let degree = entry["degree"].as_i64().unwrap();
        let turns = entry["winding_turns"].as_f64().unwrap();
        assert!((turns - degree as f64).abs() < 1e-6, "{name}: oracle turns {turns}");
        let radius = entry["radius"].as_f64().unwrap();
        assert_eq!(winding_degree(&f, radius, 256).unwrap(), degree, "{name}");

        let half = entry["box"].as_f64().unwrap();
        let pts = find_critical_points(&f, Rect::square(half), 40, 1e-8).unwrap().points;
        let want = entry["zeros"].as_array().unwrap();
        assert_eq!(pts.len(), want.len(), "{name}: {pts:?}");
        for (p, z) in pts.iter().zip(want) {
            let q = Vec2::new(z["x"].as_f64().unwrap(), z["y"].as_f64().unwrap());
            assert!(p.position.distance(q) < 1e-7, "{name}: {:?} vs {q:?}", p.position);
            assert_eq!(kind_name(p.kind), z["kind"].as_str().unwrap(), "{name}");
        }
        assert_eq!(hessian_sum_degree(&pts).unwrap(), degree, "{name}");
        assert_eq!(morse_count_degree(&pts).unwrap(), degree, "{name}");
    }
}

fn label_of(name: &str) -> LimitLabel {
    // Sorted zeros of the double well: (-1,0), (0,0), (1,0).
    match name {
        "source_left" => LimitLabel::AtCritical(0),
        "saddle" => LimitLabel::AtCritical(1),
        "source_right" => LimitLabel::AtCritical(2),
        "infinity" => LimitLabel::AtInfinity,
        other => panic!("unexpected label {other}"),
    }
}

#[test]
fn double_well_axes_match_one_dimensional_oracle() {
    let data = fixture("double_well_axes.json");
    let f = GradientField::new(Potential::double_well());
    let pts = find_critical_points(&f, Rect::square(3.0), 20, 1e-8).unwrap().points;
    let an = FlowAnalyzer::new(&f, pts.clone(), IntegrationCaps::with_escape(50.0));

    for row in data["x_axis"].as_array().unwrap() {
        let z0 = Vec2::new(row["x0"].as_f64().unwrap(), 0.0);
        let fwd = an.integrate(z0, Direction::Forward).unwrap();
        assert_eq!(fwd.forward_limit, label_of(row["forward"].as_str().unwrap()), "{z0:?}");
        let bwd = an.integrate(z0, Direction::Backward).unwrap();
        assert_eq!(bwd.backward_limit, label_of(row["backward"].as_str().unwrap()), "{z0:?}");
        assert!(fwd.samples.iter().all(|&(_, z)| z.y == 0.0), "x-axis is invariant");
    }

    for row in data["trajectory_from_half"].as_array().unwrap() {
        let t = row["t"].as_f64().unwrap();
        let tr = an.integrate_with(Vec2::new(0.5, 0.0), Direction::Forward, t).unwrap();
        let x = tr.end().x;
        assert!((x - row["x"].as_f64().unwrap()).abs() < 1e-8, "t={t}: {x}");
    }
    for row in data["vertical_from_tenth"].as_array().unwrap() {
        let t = row["t"].as_f64().unwrap();
        let tr = an.integrate_with(Vec2::new(1.0, 0.1), Direction::Forward, t).unwrap();
        let y = tr.end().y;
        assert!((y - row["y"].as_f64().unwrap()).abs() < 1e-8 * (1.0 + y.abs()), "t={t}: {y}");
        assert!((tr.end().x - 1.0).abs() < 1e-12);
    }

    for (p, row) in pts.iter().zip(data["zero_slopes"].as_array().unwrap()) {
        assert_eq!(p.hessian.xx, row["x_slope"].as_f64().unwrap());
        assert_eq!(p.hessian.yy, row["y_slope"].as_f64().unwrap());
        assert_eq!(p.hessian.xy, 0.0);
    }

    let portrait = analyze_portrait(&f, pts, DEFAULT_DIRECTIONS).unwrap();
    let angle = |source: usize| {
        let part = portrait.partitions.iter().find(|p| p.source == source).unwrap();
        assert_eq!(part.separatrices.len(), 1);
        assert_eq!(part.separatrices[0].destination, LimitLabel::AtCritical(1));
        part.separatrices[0].angle
    };
    let right = data["separatrix_angle_at_right_source"].as_f64().unwrap();
    let left = data["separatrix_angle_at_left_source"].as_f64().unwrap();
    assert!(wrap_pi(angle(2) - right).abs() < 1e-6);
    assert!(wrap_pi(angle(0) - left).abs() < 1e-6);
    let m = &portrait.manifolds[0];
    let mut back: Vec<_> = m.stable.iter().map(|b| b.backward_limit).collect();
    back.sort();
    assert_eq!(back, vec![LimitLabel::AtCritical(0), LimitLabel::AtCritical(2)]);
    assert!(m.unstable.iter().all(|b| b.forward_limit == LimitLabel::AtInfinity));
}

#[test]
fn exit_betti_matches_simplicial_table() {
    let data = fixture("exit_betti.json");
    for row in data["rows"].as_array().unwrap() {
        let m = row["m"].as_u64().unwrap() as usize;
        let e = match row["exit"].as_str().unwrap() {
            "empty" => ExitStructure::Empty,
            "full" => ExitStructure::Full,
            _ => ExitStructure::Arcs(m),
        };
        let want: Vec<u32> = row["betti"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap() as u32).collect();
        assert_eq!(conley_betti(&e).as_array().to_vec(), want, "{e:?}");
    }
}
