use gradhom_core::flow::{
    analyze_portrait, check_generic, connection_graph, find_critical_points, lemmas, CriticalKind, FlowAnalyzer,
    GenericityViolation, IntegrationCaps, LimitLabel, DEFAULT_DIRECTIONS,
};
use gradhom_core::math::{Rect, Vec2, PI};
use gradhom_core::reduction::NodeRef;
use gradhom_core::{GradientField, Potential, PotentialTerm};

fn double_well() -> GradientField {
    GradientField::new(Potential::double_well())
}

fn analyzer(f: &GradientField, h: f64) -> FlowAnalyzer<'_, GradientField> {
    let pts = find_critical_points(f, Rect::square(h), 24, 1e-8).unwrap().points;
    let r = gradhom_core::flow::default_escape_radius(f, &pts);
    FlowAnalyzer::new(f, pts, IntegrationCaps::with_escape(r))
}

#[test]
fn identity_partition_is_one_escaping_arc() {
    let f = GradientField::identity();
    let an = analyzer(&f, 2.0);
    let p = an.direction_partition(0, 32).unwrap();
    assert!(p.is_full_escape());
    assert!(p.separatrices.is_empty());
}

#[test]
fn double_well_partition_has_one_separatrix_facing_the_saddle() {
    let f = double_well();
    let an = analyzer(&f, 3.0);
    // Sorted: (-1,0) source, (0,0) saddle, (1,0) source.
    let p = an.direction_partition(2, 64).unwrap();
    assert_eq!(p.separatrices.len(), 1);
    assert!((p.separatrices[0].angle - PI).abs() < 1e-6, "{}", p.separatrices[0].angle);
    assert_eq!(p.separatrices[0].destination, LimitLabel::AtCritical(1));
    assert_eq!(p.labels.len(), 1);
    assert_eq!(p.labels[0].1, LimitLabel::AtInfinity);
    let q = an.direction_partition(0, 64).unwrap();
    assert!(q.separatrices[0].angle.abs() < 1e-6 || (q.separatrices[0].angle - 2.0 * PI).abs() < 1e-6);
}

#[test]
fn distant_hill_captures_an_arc() {
    let pot = Potential::identity().with(PotentialTerm::gauss(8.0, Vec2::new(4.0, 0.0), 0.7));
    let f = GradientField::new(pot);
    let an = analyzer(&f, 8.0);
    let kinds: Vec<_> = an.points.iter().map(|p| p.kind).collect();
    assert_eq!(kinds, vec![CriticalKind::Source, CriticalKind::Sink, CriticalKind::Saddle]);
    let p = an.direction_partition(0, 128).unwrap();
    let sink = LimitLabel::AtCritical(1);
    assert_eq!(p.label_at(0.0), Some(sink));
    let arc = p.labels.iter().find(|a| a.1 == sink).unwrap().0;
    assert!(arc.length > 0.0 && arc.contains(0.0));
    assert_eq!(p.separatrices.len(), 2);
    assert!(p.separatrices.iter().all(|s| s.destination == LimitLabel::AtCritical(2)));
}

#[test]
fn linear_saddle_branches_escape() {
    let f = GradientField::new(Potential::saddle());
    let an = analyzer(&f, 2.0);
    let m = an.saddle_manifolds(0).unwrap();
    for br in &m.unstable {
        assert_eq!(br.forward_limit, LimitLabel::AtInfinity);
        assert!(br.end().y.abs() < 1e-6 * br.end().norm());
    }
    for br in &m.stable {
        assert_eq!(br.backward_limit, LimitLabel::AtInfinity);
        assert!(br.end().x.abs() < 1e-6 * br.end().norm());
    }
}

#[test]
fn double_well_saddle_branches() {
    let f = double_well();
    let an = analyzer(&f, 3.0);
    let m = an.saddle_manifolds(1).unwrap();
    let mut stable: Vec<_> = m.stable.iter().map(|t| t.backward_limit).collect();
    stable.sort();
    assert_eq!(stable, vec![LimitLabel::AtCritical(0), LimitLabel::AtCritical(2)]);
    assert!(m.unstable.iter().all(|t| t.forward_limit == LimitLabel::AtInfinity));
}

#[test]
fn connection_graph_examples() {
    let g = connection_graph(&GradientField::identity(), Rect::square(2.0), 8).unwrap();
    assert_eq!(g.nodes.len(), 1);
    assert_eq!(g.edges.len(), 1);
    assert_eq!((g.edges[0].to, g.edges[0].multiplicity), (NodeRef::Infinity, 1));

    let g = connection_graph(&double_well(), Rect::square(3.0), 20).unwrap();
    assert_eq!(g.multiplicity(0, NodeRef::Point(1)), 1);
    assert_eq!(g.multiplicity(2, NodeRef::Point(1)), 1);
    assert_eq!(g.multiplicity(0, NodeRef::Infinity), 1);
    assert_eq!(g.multiplicity(2, NodeRef::Infinity), 1);
    assert_eq!(g.multiplicity(1, NodeRef::Infinity), 2);
    assert_eq!(g.edges.len(), 5);

    let g = connection_graph(&GradientField::minus_identity(), Rect::square(2.0), 8).unwrap();
    assert_eq!(g.sinks(), vec![0]);
    assert!(g.edges.is_empty());
}

#[test]
fn genericity_examples() {
    assert!(check_generic(&GradientField::identity(), Rect::square(2.0), 8).generic);
    assert!(check_generic(&double_well(), Rect::square(3.0), 20).generic);
    let fold = GradientField::new(Potential::new(vec![
        PotentialTerm::monomial(1.0 / 3.0, 3, 0),
        PotentialTerm::monomial(0.5, 0, 2),
    ]));
    let r = check_generic(&fold, Rect::square(1.0), 8);
    assert!(!r.generic);
    assert_eq!(r.violations, vec![GenericityViolation::DegenerateZero { index: 0 }]);
}

#[test]
fn saddle_connection_is_detected() {
    // φ = x − x³/3 + x·y²: saddles at (±1, 0) joined along the invariant x-axis.
    let f = GradientField::new(Potential::new(vec![
        PotentialTerm::monomial(1.0, 1, 0),
        PotentialTerm::monomial(-1.0 / 3.0, 3, 0),
        PotentialTerm::monomial(1.0, 1, 2),
    ]));
    let r = check_generic(&f, Rect::square(2.0), 16);
    assert_eq!(r.points.len(), 2);
    assert!(!r.generic);
    assert!(r.violations.iter().any(|v| matches!(v, GenericityViolation::SaddleConnection { from: 0, to: 1, .. })));
}

#[test]
fn lemma_checks_on_double_well() {
    let f = double_well();
    let pts = find_critical_points(&f, Rect::square(3.0), 20, 1e-8).unwrap().points;
    let portrait = analyze_portrait(&f, pts, DEFAULT_DIRECTIONS).unwrap();
    let rep = lemmas::check_lemmas(&f, &portrait, Some(1)).unwrap();
    assert_eq!(rep.total_violations(), 0, "{rep:?}");
    assert_eq!(rep.key_checked, 2);
    assert_eq!(rep.degree_graph_ok, Some(true));
}
