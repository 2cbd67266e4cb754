//! Geometric cancellation of a source–saddle pair joined by one orbit.
//!
//! The path is `ψ_t = φ + t·c·g(ξ)·χ(v)` in coordinates `(ξ, v)` of a tube
//! around the chord from the saddle (`ξ = −1`) to the source (`ξ = +1`).
//! `g′ = 1` along the chord, so at `t = ½` with `c = 2·max(−∂_ξφ)` the two
//! zeros merge into a degenerate one and for `t > ½` none is left in the
//! tube. The negative lobe that returns `g` to zero sits beyond the source.

use alloc::vec::Vec;

use super::moves::{orbits_between, ReductionMove};
use super::ReductionError;
use crate::field::{GradientField, Potential, PotentialTerm, ScalarField, Sign, TubeTemplate};
use crate::flow::{analyze_portrait, find_critical_points, CriticalPoint, FlowPortrait, LimitLabel, DEFAULT_DIRECTIONS};
use crate::homotopy::{validate, FamilyKind, PotentialPath, ValidationGrid, ValidationReport};
use crate::math::{Rect, Vec2};

/// Transverse `(v_core, v_outer)` candidates, in units of the chord length.
pub const TUBE_WIDTHS: [(f64, f64); 4] = [(1.5, 5.0), (1.0, 3.0), (0.75, 2.0), (0.5, 1.25)];
/// Negative-lobe half widths tried, in `ξ` units.
pub const LOBE_WIDTHS: [f64; 3] = [2.0, 4.0, 8.0];
/// Axial ramp width, in `ξ` units.
pub const RAMP: f64 = 0.5;
/// Allowed distance of the merge parameter from `½`.
pub const MERGE_WINDOW: f64 = 0.2;
/// Largest endpoint mismatch tolerated at `t = 0`.
pub const BLEND_TOL: f64 = 1e-6;

const CHORD_SAMPLES: usize = 2001;
const CHECK_TIMES: [f64; 5] = [0.25, 0.4, 0.6, 0.75, 1.0];

#[derive(Clone, Debug, PartialEq)]
pub struct Cancellation {
    pub mv: ReductionMove,
    pub path: PotentialPath,
    pub template: TubeTemplate,
    /// `max(−∂_ξφ)` on the chord.
    pub b_eff: f64,
    pub c_max: f64,
    /// Parameter at which the pair merges, located by bisection.
    pub t_merge: f64,
    /// Zero counts of the whole field at the checked parameters.
    pub counts: Vec<(f64, usize)>,
    pub validation: ValidationReport,
}

impl Cancellation {
    pub fn field_at(&self, t: f64) -> GradientField {
        self.path.field_at(t)
    }
}

/// Support rectangle of a tube, padded.
fn support_box(tt: &TubeTemplate) -> Rect {
    let (lo, hi) = tt.xi_support();
    let corners = [tt.point(lo, -tt.v_outer), tt.point(lo, tt.v_outer), tt.point(hi, -tt.v_outer), tt.point(hi, tt.v_outer)];
    let mut min = corners[0];
    let mut max = corners[0];
    for c in &corners[1..] {
        min = Vec2::new(min.x.min(c.x), min.y.min(c.y));
        max = Vec2::new(max.x.max(c.x), max.y.max(c.y));
    }
    let pad = 0.05 * (max - min).norm() + 1e-3;
    Rect::new(min - Vec2::new(pad, pad), max + Vec2::new(pad, pad))
}

/// Zeros of `∇ψ_t` inside the tube support.
fn zeros_in_support(base: &Potential, tt: &TubeTemplate, c: f64, t: f64, grid: usize) -> Option<usize> {
    let psi = base.clone().with(PotentialTerm::Tube { amp: t * c, template: *tt });
    let search = find_critical_points(&GradientField::new(psi), support_box(tt), grid, 1e-10).ok()?;
    Some(search.points.iter().filter(|p| tt.in_support(p.position)).count())
}

/// Zeros of `∇ψ_t` near the chord, where the pair lives until it merges.
fn zeros_near_chord(base: &Potential, tt: &TubeTemplate, c: f64, t: f64) -> usize {
    let psi = GradientField::new(base.clone().with(PotentialTerm::Tube { amp: t * c, template: *tt }));
    let a = tt.point(-1.25, -tt.v_core);
    let b = tt.point(1.25, tt.v_core);
    let e = tt.point(-1.25, tt.v_core);
    let d = tt.point(1.25, -tt.v_core);
    let min = Vec2::new(a.x.min(b.x).min(e.x).min(d.x), a.y.min(b.y).min(e.y).min(d.y));
    let max = Vec2::new(a.x.max(b.x).max(e.x).max(d.x), a.y.max(b.y).max(e.y).max(d.y));
    match find_critical_points(&psi, Rect::new(min, max), 32, 1e-12) {
        Ok(s) => s
            .points
            .iter()
            .filter(|p| {
                let (xi, v) = tt.coords(p.position);
                xi.abs() <= 1.25 && v.abs() <= tt.v_core
            })
            .count(),
        Err(_) => 2,
    }
}

/// The connecting orbit: the stable branch of the saddle that leaves the source.
fn connecting_orbit(portrait: &FlowPortrait, source: usize, saddle: usize) -> Option<Vec<Vec2>> {
    let m = portrait.manifolds.iter().find(|m| m.saddle == saddle)?;
    m.stable
        .iter()
        .find(|br| br.backward_limit == LimitLabel::AtCritical(source))
        .map(|br| br.samples.iter().map(|&(_, z)| z).collect())
}

/// Realizes a `CancelPair` (or, through the negated field, a `MirrorCancelPair`)
/// on the field whose zeros and orbits `portrait` describes.
pub fn realize_cancellation(
    f: &GradientField,
    portrait: &FlowPortrait,
    mv: ReductionMove,
) -> Result<Cancellation, ReductionError> {
    match mv {
        ReductionMove::CancelPair { source, saddle } => realize_source(f, portrait, source, saddle, mv),
        ReductionMove::MirrorCancelPair { sink, saddle } => {
            let g = f.negated();
            let points: Vec<CriticalPoint> = portrait.points.iter().map(|p| CriticalPoint::at(&g, p.position)).collect();
            let mirrored = analyze_portrait(&g, points, DEFAULT_DIRECTIONS)?;
            let mut c = realize_source(&g, &mirrored, sink, saddle, mv)?;
            c.path.sign = Sign::Minus;
            c.validation = validate(&c.path, &validation_grid(&c.template, portrait));
            Ok(c)
        }
        _ => Err(ReductionError::InvalidMove { reason: "only single-orbit pairs are realized geometrically" }),
    }
}

fn validation_grid(tt: &TubeTemplate, portrait: &FlowPortrait) -> ValidationGrid {
    let b = support_box(tt);
    let extent = portrait.points.iter().map(|p| p.position.norm()).fold(b.outer_radius(), f64::max);
    let r0 = extent + 1.0;
    ValidationGrid {
        half_width: extent,
        n: 41,
        t_samples: 11,
        probe_radii: (0..8).map(|k| r0 * (1.0 + 0.5 * k as f64)).collect(),
        circle_samples: 180,
    }
}

fn realize_source(
    f: &GradientField,
    portrait: &FlowPortrait,
    source: usize,
    saddle: usize,
    mv: ReductionMove,
) -> Result<Cancellation, ReductionError> {
    if orbits_between(&portrait.graph, source, saddle) != 1 {
        return Err(ReductionError::InvalidMove { reason: "cancellation needs exactly one connecting orbit" });
    }
    let orbit = connecting_orbit(portrait, source, saddle)
        .ok_or(ReductionError::InvalidMove { reason: "no stable branch of the saddle leaves the source" })?;
    let ps = portrait.points[saddle].position;
    let px = portrait.points[source].position;
    let chord = px - ps;
    let len = chord.norm();
    let phi = f.effective_potential();
    let base = TubeTemplate {
        origin: (ps + px) * 0.5,
        axis: chord / len,
        half_len: 0.5 * len,
        v_core: 0.0,
        v_outer: 1.0,
        ramp: RAMP,
        lobe_center: 0.0,
        lobe_half_width: 1.0,
    };
    let b_eff = (0..CHORD_SAMPLES)
        .map(|k| {
            let xi = -1.0 + 2.0 * k as f64 / (CHORD_SAMPLES - 1) as f64;
            -base.half_len * phi.gradient(base.point(xi, 0.0)).dot(base.axis)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    if !(b_eff > 0.0) {
        return Err(ReductionError::TemplateInfeasible);
    }
    let c_max = 2.0 * b_eff;
    let n_total = portrait.points.len();
    let mut any_clear = false;
    for (vc, vo) in TUBE_WIDTHS {
        let (v_core, v_outer) = (vc * len, vo * len);
        let deviation = orbit
            .iter()
            .map(|&z| base.coords(z))
            .filter(|(xi, _)| xi.abs() <= 1.0)
            .map(|(_, v)| v.abs())
            .fold(0.0, f64::max);
        if deviation > 0.5 * v_core {
            continue;
        }
        for w in LOBE_WIDTHS {
            let tt = TubeTemplate { v_core, v_outer, lobe_center: 1.0 + RAMP + w, lobe_half_width: w, ..base };
            let blocked = portrait
                .points
                .iter()
                .enumerate()
                .any(|(i, p)| i != source && i != saddle && tt.in_support(p.position));
            if blocked {
                continue;
            }
            any_clear = true;
            let grid = 48;
            let measured: Vec<(f64, Option<usize>)> = core::iter::once(0.0)
                .chain(CHECK_TIMES)
                .map(|t| (t, zeros_in_support(&phi, &tt, c_max, t, grid)))
                .collect();
            let ok = measured.iter().all(|&(t, n)| n == Some(if t < 0.5 { 2 } else { 0 }));
            if !ok {
                continue;
            }
            let (mut lo, mut hi) = (0.4, 0.6);
            for _ in 0..40 {
                let mid = 0.5 * (lo + hi);
                if zeros_near_chord(&phi, &tt, c_max, mid) > 0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let t_merge = 0.5 * (lo + hi);
            if (t_merge - 0.5).abs() > MERGE_WINDOW {
                continue;
            }
            let delta = Potential::new(alloc::vec![PotentialTerm::Tube { amp: c_max, template: tt }]);
            let path = PotentialPath {
                base: phi.clone(),
                delta,
                sign: Sign::Plus,
                kind: FamilyKind::CancelPath,
                meta: alloc::vec![
                    ("b_eff", b_eff),
                    ("c_max", c_max),
                    ("t_merge", t_merge),
                    ("v_core", v_core),
                    ("v_outer", v_outer),
                    ("lobe_half_width", w),
                ],
            };
            let residual = blend_residual(f, &path, portrait);
            if residual > BLEND_TOL {
                return Err(ReductionError::BlendResidual { residual });
            }
            let counts = measured.iter().map(|&(t, n)| (t, n_total - 2 + n.unwrap_or(0))).collect();
            let validation = validate(&path, &validation_grid(&tt, portrait));
            return Ok(Cancellation { mv, path, template: tt, b_eff, c_max, t_merge, counts, validation });
        }
    }
    if any_clear {
        Err(ReductionError::TemplateInfeasible)
    } else {
        Err(ReductionError::TubeNotClear)
    }
}

/// Largest `|∇ψ₀ − f|` at the zeros and on a coarse grid around them.
fn blend_residual(f: &GradientField, path: &PotentialPath, portrait: &FlowPortrait) -> f64 {
    let f0 = path.field_at(0.0);
    let extent = portrait.points.iter().map(|p| p.position.norm()).fold(1.0, f64::max);
    let mut worst = 0.0f64;
    for i in 0..=20 {
        for j in 0..=20 {
            let z = Vec2::new(-extent + 0.1 * extent * i as f64, -extent + 0.1 * extent * j as f64);
            worst = worst.max((f0.gradient(z) - f.gradient(z)).norm());
        }
    }
    worst
}
