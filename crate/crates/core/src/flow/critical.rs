//! Zeros of `∇φ`: grid-seeded damped Newton with the analytic Hessian.

use alloc::vec::Vec;

use super::FlowError;
use crate::field::ScalarField;
use crate::math::{Rect, Sym2, Vec2};

/// Gradient norm a refined zero must reach.
pub const ZERO_TOL: f64 = 1e-9;
/// Zeros closer than this are merged.
pub const MERGE_RADIUS: f64 = 1e-6;
/// `|det H| < DEGENERACY · ‖H‖²` marks a degenerate zero.
pub const DEGENERACY: f64 = 1e-8;

/// Type of a zero of `f = ∇φ`. The flow of `f` increases `φ`, so minima
/// repel (sources) and maxima attract (sinks).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CriticalKind {
    Source,
    Sink,
    Saddle,
    Degenerate,
}

impl CriticalKind {
    /// Sign of `det Hess`, or `None` when degenerate.
    pub fn index(self) -> Option<i32> {
        match self {
            CriticalKind::Source | CriticalKind::Sink => Some(1),
            CriticalKind::Saddle => Some(-1),
            CriticalKind::Degenerate => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CriticalKind::Source => "source",
            CriticalKind::Sink => "sink",
            CriticalKind::Saddle => "saddle",
            CriticalKind::Degenerate => "degenerate",
        }
    }
}

pub fn classify_hessian(h: &Sym2) -> CriticalKind {
    let det = h.det();
    let scale = h.frobenius_sq();
    if scale == 0.0 || det.abs() < DEGENERACY * scale {
        CriticalKind::Degenerate
    } else if det < 0.0 {
        CriticalKind::Saddle
    } else if h.trace() > 0.0 {
        CriticalKind::Source
    } else {
        CriticalKind::Sink
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalPoint {
    pub position: Vec2,
    /// `φ(position)`
    pub value: f64,
    pub hessian: Sym2,
    pub kind: CriticalKind,
}

impl CriticalPoint {
    /// Classifies a known zero of `f`.
    pub fn at<F: ScalarField + ?Sized>(f: &F, position: Vec2) -> Self {
        let hessian = f.hessian(position);
        CriticalPoint { position, value: f.value(position), hessian, kind: classify_hessian(&hessian) }
    }
}

/// Outcome of a critical-point search.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CriticalSearch {
    /// Deduplicated zeros, sorted lexicographically by position.
    pub points: Vec<CriticalPoint>,
    /// Seeds whose Newton iteration failed to reach a zero inside the box.
    pub diverged_seeds: usize,
    /// Sampled `min |f|` along the box boundary.
    pub boundary_min_norm: f64,
}

/// Damped Newton iteration on `∇φ = 0` from `seed`.
pub fn newton_refine<F: ScalarField + ?Sized>(f: &F, seed: Vec2, max_iter: usize) -> Option<Vec2> {
    let mut z = seed;
    let mut g = f.gradient(z);
    let mut gn = g.norm();
    for _ in 0..max_iter {
        if !gn.is_finite() {
            return None;
        }
        let h = f.hessian(z);
        let step = match h.inverse() {
            Some(hi) => hi.mul_vec(g),
            None => {
                if gn < ZERO_TOL {
                    return Some(z);
                }
                return None;
            }
        };
        if !step.is_finite() {
            return None;
        }
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let cand = z - step * lambda;
            let gc = f.gradient(cand);
            let gcn = gc.norm();
            if gcn.is_finite() && (gcn < gn || gcn == 0.0) {
                z = cand;
                g = gc;
                gn = gcn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        let moved = step.norm() * lambda;
        if !accepted {
            // No decrease possible: either we sit on the zero to rounding or we are stuck.
            return if gn < ZERO_TOL { Some(z) } else { None };
        }
        if gn < ZERO_TOL && (moved <= 1e-12 * (1.0 + z.norm()) || gn == 0.0) {
            return Some(z);
        }
    }
    if gn < ZERO_TOL {
        Some(z)
    } else {
        None
    }
}

/// Finds and classifies every zero of `f` inside `bbox`.
///
/// Seeds a `grid × grid` lattice, refines each seed with damped Newton to
/// `|∇φ| < 1e-9`, and merges zeros within `1e-6`. Fails with
/// [`FlowError::BoundaryZero`] when `|f|` drops below `tol` on the boundary.
pub fn find_critical_points<F: ScalarField + ?Sized>(
    f: &F,
    bbox: Rect,
    grid: usize,
    tol: f64,
) -> Result<CriticalSearch, FlowError> {
    let grid = grid.max(2);
    let boundary_min_norm = bbox
        .boundary_points(16 * grid)
        .map(|z| f.gradient(z).norm())
        .fold(f64::INFINITY, f64::min);
    if !(boundary_min_norm >= tol) {
        return Err(FlowError::BoundaryZero { min_norm: boundary_min_norm });
    }
    let slack = 1e-9 * (bbox.width() + bbox.height());
    let inflated = Rect::new(bbox.min - Vec2::new(slack, slack), bbox.max + Vec2::new(slack, slack));
    let mut found: Vec<Vec2> = Vec::new();
    let mut diverged = 0usize;
    for i in 0..grid {
        for j in 0..grid {
            let u = (i as f64 + 0.5) / grid as f64;
            let v = (j as f64 + 0.5) / grid as f64;
            let seed = bbox.lerp(u, v);
            match newton_refine(f, seed, 200) {
                Some(z) if inflated.contains(z) => {
                    if !found.iter().any(|p| p.distance(z) < MERGE_RADIUS) {
                        found.push(z);
                    }
                }
                _ => diverged += 1,
            }
        }
    }
    found.sort_by(|a, b| a.lex_cmp(*b));
    let points = found.into_iter().map(|z| CriticalPoint::at(f, z)).collect();
    Ok(CriticalSearch { points, diverged_seeds: diverged, boundary_min_norm })
}
