use gradhom_core::flow::{analyze_portrait, find_critical_points, CriticalKind, CriticalPoint, FlowPortrait, DEFAULT_DIRECTIONS};
use gradhom_core::invariants::winding_degree;
use gradhom_core::math::{Rect, Sym2, Vec2};
use gradhom_core::reduction::{
    apply_move_graph, classify, pick_cancellation, realize_cancellation, ClassLabel, ClassifyOptions, ConnectionGraph,
    NodeRef, ReductionError, ReductionMove,
};
use gradhom_core::{GradientField, Potential, PotentialTerm};

fn double_well() -> GradientField {
    GradientField::new(Potential::double_well())
}

fn portrait(f: &GradientField, h: f64, grid: usize) -> FlowPortrait {
    let pts = find_critical_points(f, Rect::square(h), grid, 1e-8).unwrap().points;
    analyze_portrait(f, pts, DEFAULT_DIRECTIONS).unwrap()
}

fn point(x: f64, y: f64, kind: CriticalKind, value: f64) -> CriticalPoint {
    let h = match kind {
        CriticalKind::Source => Sym2::IDENTITY,
        CriticalKind::Sink => Sym2::IDENTITY.scale(-1.0),
        _ => Sym2::diag(1.0, -1.0),
    };
    CriticalPoint { position: Vec2::new(x, y), value, hessian: h, kind }
}

#[test]
fn pick_on_double_well_uses_lexicographic_tie_break() {
    let p = portrait(&double_well(), 3.0, 20);
    let pick = pick_cancellation(&p.graph).unwrap();
    assert_eq!(pick.mv, ReductionMove::CancelPair { source: 0, saddle: 1 });
    assert_eq!(pick.perturbed, None);
}

#[test]
fn two_orbit_pair_and_trivial_graphs() {
    let mut g = ConnectionGraph::from_points(&[
        point(0.0, 0.0, CriticalKind::Source, 0.0),
        point(1.0, 0.0, CriticalKind::Saddle, 1.0),
    ]);
    g.add_edge(0, NodeRef::Point(1), 2);
    g.add_edge(1, NodeRef::Infinity, 2);
    let pick = pick_cancellation(&g).unwrap();
    assert_eq!(pick.mv, ReductionMove::TwoOrbitSurgery { source: 0, saddle: 1 });
    let after = apply_move_graph(&g, pick.mv).unwrap();
    assert!(after.nodes.is_empty() && after.edges.is_empty());
    assert!(matches!(
        apply_move_graph(&g, ReductionMove::CancelPair { source: 0, saddle: 1 }),
        Err(ReductionError::InvalidMove { .. })
    ));

    let lone = ConnectionGraph::from_points(&[point(0.0, 0.0, CriticalKind::Source, 0.0)]);
    assert!(matches!(pick_cancellation(&lone), Err(ReductionError::NoSaddleReachable { .. })));
}

#[test]
fn tied_saddles_request_a_bump() {
    let mut g = ConnectionGraph::from_points(&[
        point(-1.0, 0.0, CriticalKind::Saddle, 1.0),
        point(0.0, 0.0, CriticalKind::Source, 0.0),
        point(1.0, 0.0, CriticalKind::Saddle, 1.0),
    ]);
    g.add_edge(1, NodeRef::Point(0), 1);
    g.add_edge(1, NodeRef::Point(2), 1);
    let pick = pick_cancellation(&g).unwrap();
    assert_eq!(pick.mv, ReductionMove::CancelPair { source: 1, saddle: 0 });
    let (id, delta) = pick.perturbed.unwrap();
    assert_eq!(id, 0);
    assert!(delta > 0.0 && delta < 0.5);
}

#[test]
fn graph_move_on_double_well() {
    let p = portrait(&double_well(), 3.0, 20);
    let g = apply_move_graph(&p.graph, ReductionMove::CancelPair { source: 2, saddle: 1 }).unwrap();
    assert_eq!(g.nodes.len(), 1);
    assert_eq!(g.nodes[0].id, 0);
    assert_eq!(g.count_a(), p.graph.count_a() - 1);
    assert_eq!(g.count_b(), p.graph.count_b() - 1);
    assert_eq!(g.edges.len(), 1);
    assert_eq!((g.edges[0].to, g.edges[0].multiplicity, g.edges[0].stale), (NodeRef::Infinity, 2, true));
}

#[test]
fn realized_cancellation_on_double_well() {
    let f = double_well();
    let p = portrait(&f, 3.0, 20);
    let c = realize_cancellation(&f, &p, ReductionMove::CancelPair { source: 2, saddle: 1 }).unwrap();
    assert!((c.b_eff - 4.0 / (3.0 * 3f64.sqrt()) * 0.5 * 2.0).abs() < 1e-6, "{}", c.b_eff);
    assert!((c.t_merge - 0.5).abs() < 1e-3, "{}", c.t_merge);
    let count = |t: f64| find_critical_points(&c.field_at(t), Rect::new(Vec2::new(-3.0, -12.0), Vec2::new(12.0, 12.0)), 60, 1e-9).unwrap().points;
    assert_eq!(count(0.0).len(), 3);
    assert_eq!(count(0.25).len(), 3);
    assert_eq!(count(0.75).len(), 1);
    let end = count(1.0);
    assert_eq!(end.len(), 1);
    assert!(end[0].position.distance(Vec2::new(-1.0, 0.0)) < 1e-6);
    assert_eq!(end[0].kind, CriticalKind::Source);
    assert_eq!(count(c.t_merge - 0.01).len(), 3);
    assert_eq!(count(c.t_merge + 0.01).len(), 1);
    let r = 30.0;
    assert_eq!(winding_degree(&f, r, 256).unwrap(), winding_degree(&c.field_at(1.0), r, 256).unwrap());
    assert!(c.validation.endpoint_ok && c.validation.zero_compact_ok, "{:?}", c.validation);
    assert!(c.counts.iter().all(|&(t, n)| n == if t < 0.5 { 3 } else { 1 }), "{:?}", c.counts);
}

#[test]
fn blocked_tube_is_rejected() {
    let f = double_well();
    let mut p = portrait(&f, 3.0, 20);
    // A foreign critical point next to the chord.
    p.points.push(point(0.5, 0.3, CriticalKind::Saddle, 1.0));
    assert_eq!(
        realize_cancellation(&f, &p, ReductionMove::CancelPair { source: 2, saddle: 1 }),
        Err(ReductionError::TubeNotClear)
    );
}

#[test]
fn classify_examples() {
    let o = ClassifyOptions::default();
    let c = classify(&GradientField::identity(), &o).unwrap();
    assert_eq!((c.label, c.witness.len()), (ClassLabel::IdClass, 0));
    assert_eq!(c.betti_consistent, Some(true));
    let c = classify(&GradientField::minus_identity(), &o).unwrap();
    assert_eq!((c.label, c.witness.len()), (ClassLabel::MinusIdClass, 0));
    assert_eq!(c.betti_consistent, Some(true));
    let c = classify(&GradientField::new(Potential::linear(Vec2::new(1.0, 0.0))), &o).unwrap();
    assert_eq!((c.label, c.degree), (ClassLabel::NonvanishingClass, 0));
    assert!(c.witness.is_empty());
}

#[test]
fn classify_double_well_by_one_cancellation() {
    let c = classify(&double_well(), &ClassifyOptions::default()).unwrap();
    assert_eq!(c.label, ClassLabel::IdClass);
    assert_eq!(c.witness.len(), 1);
    let w = &c.witness[0];
    assert!(matches!(w.mv, ReductionMove::CancelPair { .. }));
    assert!(w.realized, "{:?}", w.fallback);
    assert_eq!(w.degree_after, Some(1));
    assert_eq!(c.betti_consistent, Some(true));
}

#[test]
fn classify_negated_double_well_by_mirror_move() {
    let c = classify(&double_well().negated(), &ClassifyOptions::default()).unwrap();
    assert_eq!(c.label, ClassLabel::MinusIdClass);
    assert_eq!(c.witness.len(), 1);
    assert!(matches!(c.witness[0].mv, ReductionMove::MirrorCancelPair { .. }));
    assert!(c.witness[0].realized, "{:?}", c.witness[0].fallback);
}

#[test]
fn saddle_alone_is_unresolved() {
    let c = classify(&GradientField::new(Potential::saddle()), &ClassifyOptions::default()).unwrap();
    assert_eq!(c.label, ClassLabel::Unresolved(-1));
}

#[test]
fn non_proper_field_is_refused() {
    let f = GradientField::new(Potential::new(vec![PotentialTerm::gauss(1.0, Vec2::ZERO, 1.0)]));
    assert_eq!(classify(&f, &ClassifyOptions::default()).unwrap_err(), ReductionError::NotProper);
}
