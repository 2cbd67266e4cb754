//! Gradient extension of boundary data on a right-angled quadrangle
//! `A = θ(I × I)`, for template maps `θ` (rectangles and annular sectors).
//!
//! Sides `θ(I × {0})`, `θ(I × {1})` carry data perpendicular to `∂A`;
//! sides `θ({0} × I)`, `θ({1} × I)` carry tangent data of unit `|v|`-length.
//! The `Y` coordinate is reparametrized by `|v|`-arclength on each tangent
//! side and blended in `X` by a smoothstep, which keeps the coordinate lines
//! perpendicular to all four sides.

use alloc::vec::Vec;

use super::square::{square_extension, Profile, SquareExtension};
use super::HomotopyError;
use crate::math::{self, smoothstep, smoothstep_d1, Mat2, Vec2, TAU};

/// Relative tolerance for the boundary hypotheses.
pub const HYPOTHESIS_TOL: f64 = 1e-4;
const TABLE: usize = 4096;
const SIDE_SAMPLES: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuadTemplate {
    /// `θ(X, Y) = origin + X·e1 + Y·e2`, `e1 ⟂ e2`.
    Rectangle { origin: Vec2, e1: Vec2, e2: Vec2 },
    /// `θ(X, Y) = center + (r0 + Y(r1 − r0))·(cos α, sin α)`, `α = a0 + X(a1 − a0)`.
    AnnularSector { center: Vec2, r0: f64, r1: f64, a0: f64, a1: f64 },
}

impl QuadTemplate {
    pub fn unit_square() -> Self {
        QuadTemplate::Rectangle { origin: Vec2::ZERO, e1: Vec2::new(1.0, 0.0), e2: Vec2::new(0.0, 1.0) }
    }

    /// Recognizes corners `x1..x4 = θ(0,0), θ(1,0), θ(1,1), θ(0,1)` of a
    /// rectangle, or of an annular sector centred at the origin.
    pub fn from_corners(c: [Vec2; 4]) -> Result<Self, HomotopyError> {
        let e1 = c[1] - c[0];
        let e2 = c[3] - c[0];
        let scale = e1.norm().max(e2.norm());
        if scale > 0.0
            && e1.norm() > 1e-12 * scale
            && e2.norm() > 1e-12 * scale
            && e1.dot(e2).abs() <= 1e-9 * e1.norm() * e2.norm()
            && (c[2] - (c[1] + e2)).norm() <= 1e-9 * scale
        {
            return Ok(QuadTemplate::Rectangle { origin: c[0], e1, e2 });
        }
        let (r0, r1) = (c[0].norm(), c[3].norm());
        let a0 = c[0].angle();
        let span = math::wrap_tau(c[1].angle() - a0);
        let same = |u: Vec2, w: Vec2| (u.normalized() - w.normalized()).norm() <= 1e-9;
        if r0 > 0.0
            && r1 > r0
            && span > 1e-12
            && (c[1].norm() - r0).abs() <= 1e-9 * r1
            && (c[2].norm() - r1).abs() <= 1e-9 * r1
            && same(c[0], c[3])
            && same(c[1], c[2])
        {
            return Ok(QuadTemplate::AnnularSector { center: Vec2::ZERO, r0, r1, a0, a1: a0 + span });
        }
        Err(HomotopyError::NoTemplate)
    }

    pub fn map(&self, x: f64, y: f64) -> Vec2 {
        match *self {
            QuadTemplate::Rectangle { origin, e1, e2 } => origin + e1 * x + e2 * y,
            QuadTemplate::AnnularSector { center, r0, r1, a0, a1 } => {
                center + Vec2::polar(r0 + y * (r1 - r0), a0 + x * (a1 - a0))
            }
        }
    }

    /// Columns `∂θ/∂X`, `∂θ/∂Y`.
    pub fn jacobian(&self, x: f64, y: f64) -> Mat2 {
        match *self {
            QuadTemplate::Rectangle { e1, e2, .. } => Mat2::from_cols(e1, e2),
            QuadTemplate::AnnularSector { r0, r1, a0, a1, .. } => {
                let rho = r0 + y * (r1 - r0);
                let a = a0 + x * (a1 - a0);
                let radial = Vec2::polar(1.0, a);
                Mat2::from_cols(radial.perp() * ((a1 - a0) * rho), radial * (r1 - r0))
            }
        }
    }

    /// `θ⁻¹(z)`, or `None` when `z` is outside `A`.
    pub fn inverse(&self, z: Vec2) -> Option<(f64, f64)> {
        let (x, y) = match *self {
            QuadTemplate::Rectangle { origin, e1, e2 } => {
                let w = Mat2::from_cols(e1, e2).inverse()?.mul_vec(z - origin);
                (w.x, w.y)
            }
            QuadTemplate::AnnularSector { center, r0, r1, a0, a1 } => {
                let d = z - center;
                let mut rel = math::wrap_tau(d.angle() - a0);
                if rel > 0.5 * (a1 - a0) + 0.5 * TAU - 1e-15 * TAU {
                    rel -= TAU;
                }
                (rel / (a1 - a0), (d.norm() - r0) / (r1 - r0))
            }
        };
        let eps = 1e-9;
        if x < -eps || x > 1.0 + eps || y < -eps || y > 1.0 + eps {
            return None;
        }
        Some((x.clamp(0.0, 1.0), y.clamp(0.0, 1.0)))
    }
}

/// Values on a uniform grid over `[0, 1]`, linearly interpolated.
#[derive(Clone, Debug, PartialEq)]
struct Tabulated {
    values: Vec<f64>,
}

impl Tabulated {
    fn locate(&self, x: f64) -> (usize, f64) {
        let n = self.values.len() - 1;
        let s = x.clamp(0.0, 1.0) * n as f64;
        let i = (math::floor(s) as usize).min(n - 1);
        (i, s - i as f64)
    }
}

impl Profile for Tabulated {
    fn value(&self, x: f64) -> f64 {
        let (i, f) = self.locate(x);
        self.values[i] * (1.0 - f) + self.values[i + 1] * f
    }
    fn slope(&self, x: f64) -> f64 {
        let (i, _) = self.locate(x);
        (self.values[i + 1] - self.values[i]) * (self.values.len() - 1) as f64
    }
}

/// `|v|`-arclength along one tangent side, normalized to end at 1.
#[derive(Clone, Debug, PartialEq)]
struct SideParam {
    /// Cumulative `∫|v||θ_Y|` at uniform `Ŷ` samples.
    cumulative: Vec<f64>,
    total: f64,
}

impl SideParam {
    /// `σ(Y)`: the `Ŷ` with normalized arclength `Y`.
    fn sigma(&self, y: f64) -> f64 {
        let target = y.clamp(0.0, 1.0) * self.total;
        let c = &self.cumulative;
        let i = c.partition_point(|&v| v < target).clamp(1, c.len() - 1);
        let (lo, hi) = (c[i - 1], c[i]);
        let f = if hi > lo { (target - lo) / (hi - lo) } else { 0.0 };
        ((i - 1) as f64 + f) / (c.len() - 1) as f64
    }
}

pub struct QuadExtension<V> {
    pub template: QuadTemplate,
    pub v: V,
    /// `±1`, making `v(x1)` agree with the orientation of the side `x1x4`.
    pub orientation: f64,
    left: SideParam,
    right: SideParam,
    square: SquareExtension<Tabulated, Tabulated>,
}

fn speed<V: Fn(Vec2) -> Vec2>(v: &V, t: &QuadTemplate, x: f64, y: f64) -> f64 {
    let ty = t.jacobian(x, y);
    v(t.map(x, y)).norm() * Vec2::new(ty.b, ty.d).norm()
}

fn col_x(m: &Mat2) -> Vec2 {
    Vec2::new(m.a, m.c)
}

fn col_y(m: &Mat2) -> Vec2 {
    Vec2::new(m.b, m.d)
}

impl<V: Fn(Vec2) -> Vec2> QuadExtension<V> {
    /// `σ(X, Y) = (1 − β(X))σ′(Y) + β(X)σ″(Y)` with its partials.
    fn blend(&self, x: f64, y: f64) -> (f64, f64, f64) {
        let b = smoothstep(x);
        let (sl, sr) = (self.left.sigma(y), self.right.sigma(y));
        let dl = self.left.total / speed(&self.v, &self.template, 0.0, sl);
        let dr = self.right.total / speed(&self.v, &self.template, 1.0, sr);
        ((1.0 - b) * sl + b * sr, smoothstep_d1(x) * (sr - sl), (1.0 - b) * dl + b * dr)
    }

    /// `Dθ̃` at square coordinates `(X, Y)`.
    fn full_jacobian(&self, x: f64, y: f64) -> (f64, Mat2) {
        let (s, sx, sy) = self.blend(x, y);
        (s, self.template.jacobian(x, s).mul(&Mat2::new(1.0, 0.0, sx, sy)))
    }

    /// Square coordinates of `z ∈ A`.
    pub fn square_coords(&self, z: Vec2) -> Option<(f64, f64)> {
        let (x, s) = self.template.inverse(z)?;
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if self.blend(x, mid).0 < s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some((x, 0.5 * (lo + hi)))
    }

    pub fn value(&self, z: Vec2) -> Option<f64> {
        let (x, y) = self.square_coords(z)?;
        Some(self.orientation * self.square.value(x, y))
    }

    /// `∇φ(z) = Dθ̃⁻ᵀ·∇ψ(θ̃⁻¹z)`.
    pub fn gradient(&self, z: Vec2) -> Option<Vec2> {
        let (x, y) = self.square_coords(z)?;
        Some(self.gradient_at(x, y))
    }

    fn gradient_at(&self, x: f64, y: f64) -> Vec2 {
        let (_, j) = self.full_jacobian(x, y);
        let inv = j.inverse().expect("template jacobian is invertible");
        inv.transpose().mul_vec(self.square.gradient(x, y)) * self.orientation
    }

    /// Largest `|∇φ − v|/|v|` over `n` samples per side.
    pub fn boundary_residual(&self, n: usize) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..=n {
            let s = k as f64 / n as f64;
            for (x, y) in [(s, 0.0), (s, 1.0), (0.0, s), (1.0, s)] {
                let (sig, _) = self.full_jacobian(x, y);
                let z = self.template.map(x, sig);
                let v = (self.v)(z);
                worst = worst.max((self.gradient_at(x, y) - v).norm() / v.norm());
            }
        }
        worst
    }

    /// Smallest `|∇φ|` on an `n×n` grid of square coordinates.
    pub fn min_norm(&self, n: usize) -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..=n {
            for j in 0..=n {
                m = m.min(self.gradient_at(i as f64 / n as f64, j as f64 / n as f64).norm());
            }
        }
        m
    }

    /// Largest corner disagreement of the square data, where the extension
    /// cannot match both adjacent sides.
    pub fn corner_mismatch(&self) -> f64 {
        self.square.corner_mismatch()
    }
}

fn side_param<V: Fn(Vec2) -> Vec2>(v: &V, t: &QuadTemplate, x: f64) -> SideParam {
    let h = 1.0 / TABLE as f64;
    let mut cumulative = Vec::with_capacity(TABLE + 1);
    cumulative.push(0.0);
    let mut prev = speed(v, t, x, 0.0);
    let mut acc = 0.0;
    for k in 1..=TABLE {
        let cur = speed(v, t, x, k as f64 * h);
        acc += 0.5 * h * (prev + cur);
        cumulative.push(acc);
        prev = cur;
    }
    SideParam { cumulative, total: acc }
}

pub fn quadrangle_extension<V: Fn(Vec2) -> Vec2>(v: V, template: QuadTemplate) -> Result<QuadExtension<V>, HomotopyError> {
    let violated = |reason, residual| Err(HomotopyError::HypothesisViolated { reason, residual });
    let mut perp = 0.0f64;
    let mut tang = 0.0f64;
    let mut floor = f64::INFINITY;
    for k in 0..=SIDE_SAMPLES {
        let s = k as f64 / SIDE_SAMPLES as f64;
        for y in [0.0, 1.0] {
            let d = col_x(&template.jacobian(s, y)).normalized();
            let w = v(template.map(s, y));
            floor = floor.min(w.norm());
            perp = perp.max(w.dot(d).abs() / w.norm());
        }
        for x in [0.0, 1.0] {
            let d = col_y(&template.jacobian(x, s)).normalized();
            let w = v(template.map(x, s));
            floor = floor.min(w.norm());
            tang = tang.max(w.cross(d).abs() / w.norm());
        }
    }
    if !(floor > 0.0) {
        return violated("boundary field vanishes", floor);
    }
    if perp > HYPOTHESIS_TOL {
        return violated("not perpendicular on sides x1x2, x3x4", perp);
    }
    if tang > HYPOTHESIS_TOL {
        return violated("not tangent on sides x1x4, x2x3", tang);
    }
    let left = side_param(&v, &template, 0.0);
    let right = side_param(&v, &template, 1.0);
    for side in [&left, &right] {
        if (side.total - 1.0).abs() > HYPOTHESIS_TOL {
            return violated("|v|-length of a tangent side is not 1", side.total - 1.0);
        }
    }
    let up = |x: f64| v(template.map(x, 0.0)).dot(col_y(&template.jacobian(x, 0.0)));
    let orientation = if up(0.0) > 0.0 { 1.0 } else { -1.0 };
    if orientation * up(1.0) <= 0.0 {
        return violated("tangent sides have opposite orientations", up(1.0));
    }
    let mut ext = QuadExtension {
        template,
        v,
        orientation,
        left,
        right,
        square: square_extension(
            Tabulated { values: alloc::vec![1.0; 2] },
            Tabulated { values: alloc::vec![1.0; 2] },
        )?,
    };
    // Square data w′, w″: second components of Dθ̃ᵀ·v(θ̃) at Y = 0 and Y = 1.
    let data = |y: f64, e: &QuadExtension<V>| {
        let values = (0..=TABLE)
            .map(|k| {
                let x = k as f64 / TABLE as f64;
                let (s, j) = e.full_jacobian(x, y);
                orientation * col_y(&j).dot((e.v)(e.template.map(x, s)))
            })
            .collect();
        Tabulated { values }
    };
    let bottom = data(0.0, &ext);
    let top = data(1.0, &ext);
    ext.square = square_extension(bottom, top)?;
    Ok(ext)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_identity() {
        let ext = quadrangle_extension(|_| Vec2::new(0.0, 1.0), QuadTemplate::unit_square()).unwrap();
        for z in [Vec2::new(0.2, 0.3), Vec2::new(0.9, 0.01), Vec2::new(0.5, 0.5)] {
            assert!((ext.gradient(z).unwrap() - Vec2::new(0.0, 1.0)).norm() < 1e-9);
        }
        assert!(ext.boundary_residual(50) < 1e-9);
        assert!(ext.gradient(Vec2::new(1.5, 0.5)).is_none());
    }

    #[test]
    fn annular_sector_radial_data() {
        let t = QuadTemplate::AnnularSector { center: Vec2::ZERO, r0: 1.0, r1: 2.0, a0: 0.0, a1: 1.0 };
        let ext = quadrangle_extension(|z: Vec2| z.normalized(), t).unwrap();
        // Pullback of (0, 1): φ = r − 1.
        for z in [Vec2::polar(1.3, 0.2), Vec2::polar(1.9, 0.8), Vec2::polar(1.5, 0.5)] {
            let g = ext.gradient(z).unwrap();
            assert!((g - z.normalized()).norm() < 1e-6, "{g:?}");
            assert!((ext.value(z).unwrap() - (z.norm() - 1.0)).abs() < 1e-6);
        }
        assert!(ext.min_norm(60) > 0.5);
        assert!(ext.boundary_residual(50) < 1e-4);
    }

    #[test]
    fn nonuniform_tangent_speed() {
        // |v| = 0.5 + y on the vertical sides integrates to 1.
        let v = |z: Vec2| Vec2::new(0.0, 0.5 + z.y + z.x * (1.0 - z.x) * (1.0 - z.y));
        let ext = quadrangle_extension(v, QuadTemplate::unit_square()).unwrap();
        assert!(ext.min_norm(80) > 0.0);
        assert!(ext.boundary_residual(100) < 1e-4);
        let g = ext.gradient(Vec2::new(0.5, 0.0)).unwrap();
        assert!((g - Vec2::new(0.0, 0.75)).norm() < 1e-6, "{g:?}");
        let side = ext.gradient(Vec2::new(0.0, 0.5)).unwrap();
        assert!((side - Vec2::new(0.0, 1.0)).norm() < 1e-6, "{side:?}");
    }

    #[test]
    fn hypotheses_are_checked() {
        let r = quadrangle_extension(|_| Vec2::new(0.0, 2.0), QuadTemplate::unit_square());
        assert!(matches!(r, Err(HomotopyError::HypothesisViolated { .. })));
        let r = quadrangle_extension(|_| Vec2::new(1.0, 1.0), QuadTemplate::unit_square());
        assert!(matches!(r, Err(HomotopyError::HypothesisViolated { .. })));
    }

    #[test]
    fn templates_from_corners() {
        let sq = [Vec2::ZERO, Vec2::new(2.0, 0.0), Vec2::new(2.0, 1.0), Vec2::new(0.0, 1.0)];
        assert!(matches!(QuadTemplate::from_corners(sq), Ok(QuadTemplate::Rectangle { .. })));
        let sec = [Vec2::polar(1.0, 0.0), Vec2::polar(1.0, 1.0), Vec2::polar(2.0, 1.0), Vec2::polar(2.0, 0.0)];
        match QuadTemplate::from_corners(sec).unwrap() {
            QuadTemplate::AnnularSector { r0, r1, a1, .. } => {
                assert!((r0 - 1.0).abs() < 1e-12 && (r1 - 2.0).abs() < 1e-12 && (a1 - 1.0).abs() < 1e-12)
            }
            t => panic!("{t:?}"),
        }
        let kite = [Vec2::ZERO, Vec2::new(1.0, 0.0), Vec2::new(3.0, 3.0), Vec2::new(0.0, 1.0)];
        assert_eq!(QuadTemplate::from_corners(kite), Err(HomotopyError::NoTemplate));
    }
}
