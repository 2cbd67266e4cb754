use gradhom_core::flow::{find_critical_points, CriticalKind, CriticalPoint};
use gradhom_core::homotopy::{
    arctan_diffeotopy, bump_lower, connect_constants, continuity_holds, continuity_modulus, milnor_homotopy, pullback_homotopy,
    quadrangle_extension, radial_push_homotopy, square_extension, validate, ConstProfile, FnProfile, HomotopyFamily,
    QuadTemplate, ValidationGrid, ENDPOINT_TOL,
};
use gradhom_core::math::{Rect, Vec2, PI, TAU};
use gradhom_core::{GradientField, Potential, PotentialTerm, ScalarField};

/// Fields with exactly one zero, all nondegenerate.
fn single_zero_fields() -> Vec<(GradientField, Vec2)> {
    let quartic = GradientField::new(Potential::new(vec![PotentialTerm::radial(1.0, 2), PotentialTerm::monomial(1.0, 1, 0)]));
    let q = -(0.25f64).cbrt();
    vec![
        (GradientField::identity(), Vec2::ZERO),
        (GradientField::minus_identity(), Vec2::ZERO),
        (GradientField::new(Potential::saddle()), Vec2::ZERO),
        (GradientField::identity().with_offset(Vec2::new(1.0, -2.0)), Vec2::new(-1.0, 2.0)),
        (quartic, Vec2::new(q, 0.0)),
    ]
}

#[test]
fn milnor_endpoints_and_continuity() {
    for (f, p) in single_zero_fields() {
        // Newton-polish the zero so the rescaled family starts exactly at it.
        let p = gradhom_core::flow::newton_refine(&f, p, 50).unwrap();
        let fam = milnor_homotopy(&f, p, 1.0).unwrap();
        assert!(fam.constants.bound_holds(), "{:?}", fam.constants);
        let rep = validate(&fam, &ValidationGrid::default());
        assert!(rep.worst_endpoint < ENDPOINT_TOL, "{}", rep.worst_endpoint);
        assert!(rep.gradient_ok, "{}", rep.worst_cross_partial);
        let m = continuity_modulus(&fam, &[1e-2, 1e-3, 1e-4], 3.0, 41);
        assert!(continuity_holds(&m), "{m:?}");
    }
}

#[test]
fn radial_push_inequalities_for_coordinate_fields() {
    for c in [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)] {
        let h = radial_push_homotopy(&GradientField::new(Potential::linear(c))).unwrap();
        let q = h.check_inequalities(3.0, 41, 11);
        assert!(q.worst() >= -1e-10, "{q:?}");
        let rep = validate(&h, &ValidationGrid::default());
        assert!(rep.endpoint_ok && rep.zero_compact_ok && rep.gradient_ok, "{rep:?}");
        // Constant field pushed: the circle minimum grows like (1 + R/2)·c on the compact half.
        let r = 20.0;
        let min = (0..360).map(|k| h.eval(1.0, Vec2::polar(r, TAU * k as f64 / 360.0)).norm()).fold(f64::INFINITY, f64::min);
        assert!(min >= (1.0 + 0.5 * r) * h.c - 1e-9, "{min}");
    }
}

#[test]
fn constant_connection_never_vanishes() {
    let g = connect_constants(Vec2::new(2.0, 0.0), Vec2::new(0.0, 3.0)).unwrap();
    for k in 0..=100 {
        let t = k as f64 / 100.0;
        let n = g.constant(t).norm();
        assert!((2.0 - 1e-12..=3.0 + 1e-12).contains(&n));
    }
    let rep = validate(&g, &ValidationGrid::default());
    assert!(rep.endpoint_ok && rep.zero_compact_ok && rep.gradient_ok, "{rep:?}");
}

#[test]
fn arctan_diffeotopy_values() {
    let th = arctan_diffeotopy(1.0);
    assert!((th.mu(1.0) - 0.5).abs() < 1e-12);
    for k in 0..200 {
        let x = Vec2::polar(0.1 * k as f64 + 1e3 * (k % 7) as f64, 0.37 * k as f64);
        assert!(th.apply(1.0, x).norm() < 1.0);
    }
    assert!(th.apply(1.0, Vec2::new(1e12, 0.0)).norm() > 1.0 - 1e-9);
    assert_eq!(th.validate(11, 200), 0);
}

#[test]
fn pullback_of_quadratic_keeps_its_only_zero() {
    let phi = Potential::identity();
    let f = GradientField::new(phi.clone());
    let zeros = [CriticalPoint::at(&f, Vec2::ZERO)];
    let fam = pullback_homotopy(&phi, arctan_diffeotopy(2.0), &zeros).unwrap();
    let rep = validate(&fam, &ValidationGrid::default());
    assert!(rep.endpoint_ok && rep.zero_compact_ok, "{rep:?}");
    for k in 0..=10 {
        let t = k as f64 / 10.0;
        assert_eq!(fam.eval(t, Vec2::ZERO), Vec2::ZERO);
        for a in 0..16 {
            for r in [0.01, 0.5, 3.0, 50.0] {
                assert!(fam.eval(t, Vec2::polar(r, a as f64 * PI / 8.0)).norm() > 0.0);
            }
        }
    }
}

#[test]
fn square_extension_cases() {
    let trivial = square_extension(ConstProfile(1.0), ConstProfile(1.0)).unwrap();
    for i in 0..200 {
        for j in 0..200 {
            let (x, y) = ((i as f64 + 0.5) / 200.0, (j as f64 + 0.5) / 200.0);
            assert_eq!(trivial.value(x, y), y);
        }
    }
    assert!(trivial.min_dy(200) > 0.0);

    let steep = square_extension(ConstProfile(2.0), ConstProfile(0.5)).unwrap();
    assert!(steep.min_dy(200) > 0.0);
    assert!(steep.boundary_residual(200) < 1e-12);

    let wavy = square_extension(
        FnProfile { value: |x: f64| 1.0 + 0.8 * (TAU * x).sin(), slope: |x: f64| 0.8 * TAU * (TAU * x).cos() },
        FnProfile { value: |x: f64| 3.0 - 2.5 * x, slope: |_| -2.5 },
    )
    .unwrap();
    assert!(wavy.min_dy(200) > 0.0);
    assert!(wavy.boundary_residual(200) < 1e-12);
}

#[test]
fn annular_sector_extension_is_nonvanishing() {
    let t = QuadTemplate::from_corners([
        Vec2::new(1.0, 0.0),
        Vec2::new(0.0, 1.0),
        Vec2::new(0.0, 2.0),
        Vec2::new(2.0, 0.0),
    ])
    .unwrap();
    // Radial data, the gradient of |z| − 1.
    let ext = quadrangle_extension(|z: Vec2| z / z.norm(), t).unwrap();
    assert!(ext.min_norm(60) > 0.5);
    assert!(ext.boundary_residual(60) < 1e-6, "{}", ext.boundary_residual(60));
}

#[test]
fn bump_path_keeps_the_critical_set() {
    let p = Potential::double_well();
    let f = GradientField::new(p.clone());
    let bbox = Rect::square(3.0);
    let before = find_critical_points(&f, bbox, 24, 1e-8).unwrap().points;
    let (_, path) = bump_lower(&p, Vec2::ZERO, 0.01, &before).unwrap();
    for k in 0..=10 {
        let t = k as f64 / 10.0;
        let g = path.field_at(t);
        let now = find_critical_points(&g, bbox, 24, 1e-8).unwrap().points;
        assert_eq!(now.len(), before.len());
        for (a, b) in now.iter().zip(&before) {
            assert!(a.position.distance(b.position) < 1e-6);
            assert_eq!(a.kind, b.kind);
            if b.kind == CriticalKind::Saddle {
                assert!((g.value(a.position) - (b.value - 0.01 * t)).abs() < 1e-12);
            } else {
                assert_eq!(g.value(a.position), b.value);
            }
        }
    }
    let rep = validate(&path, &ValidationGrid::default());
    assert!(rep.endpoint_ok && rep.zero_compact_ok);
}
