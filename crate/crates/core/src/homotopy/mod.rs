//! Parametrized field families `h(t, ·)`, `t ∈ [0, 1]`, with the explicit
//! constructions used to deform proper gradient fields into each other,
//! and a sampling validator for the gradient, zero-compactness and
//! properness conditions.

mod bump;
mod diffeotopy;
mod milnor;
mod quadrangle;
mod radial;
mod square;

pub use bump::{bump_lower, BUMP_SCAN};
pub use diffeotopy::{arctan_diffeotopy, pullback_homotopy, ArctanDiffeotopy, PullbackFamily, ZetaPullback};
pub use milnor::{milnor_homotopy, MilnorConstants, MilnorFamily};
pub use quadrangle::{quadrangle_extension, QuadExtension, QuadTemplate};
pub use radial::{connect_constants, radial_push_homotopy, xi, xi_jacobian, ConstantConnect, PushInequalities, RadialPush};
pub use square::{square_extension, ConstProfile, FnProfile, Profile, SquareExtension, SquareProfile};

use alloc::vec::Vec;

use thiserror::Error;

use crate::field::{GradientField, Potential, PropernessVerdict, ScalarField, Sign};
use crate::math::{self, Vec2, TAU};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum HomotopyError {
    #[error("field does not vanish at the given point (|f| = {norm:e})")]
    NotAZero { norm: f64 },
    #[error("Hessian at the zero is singular")]
    SingularHessian,
    #[error("field has {count} zeros, expected exactly one")]
    MultipleZeros { count: usize },
    #[error("properness constants could not be located")]
    ConstantsNotFound,
    #[error("field has a zero (min |f| = {min_norm:e})")]
    HasZero { min_norm: f64 },
    #[error("constant vector is zero")]
    ZeroConstant,
    #[error("zero at ({x}, {y}) lies outside the image of the diffeotopy")]
    ZeroEscapesImage { x: f64, y: f64 },
    #[error("no bump support radius keeps the critical set unchanged")]
    SupportTooLarge,
    #[error("lowering exceeds half the gap to the nearest critical value")]
    DeltaTooLarge,
    #[error("no admissible profile: {reason}")]
    ProfileInfeasible { reason: &'static str },
    #[error("boundary data violates a hypothesis: {reason} (residual {residual:e})")]
    HypothesisViolated { reason: &'static str, residual: f64 },
    #[error("no template diffeomorphism for this quadrangle")]
    NoTemplate,
    #[error("interpolating potential gradient vanishes on the boundary circle")]
    ZetaVanishes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Milnor,
    RadialPush,
    Diffeotopy,
    Pullback,
    CancelPath,
    ConstantConnect,
    BumpPath,
    StraightLine,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Milnor => "milnor",
            FamilyKind::RadialPush => "radial_push",
            FamilyKind::Diffeotopy => "diffeotopy",
            FamilyKind::Pullback => "pullback",
            FamilyKind::CancelPath => "cancel_path",
            FamilyKind::ConstantConnect => "constant_connect",
            FamilyKind::BumpPath => "bump_path",
            FamilyKind::StraightLine => "straight_line",
        }
    }
}

/// A family of planar fields `h(t, ·)` with declared endpoint fields.
pub trait HomotopyFamily {
    fn eval(&self, t: f64, z: Vec2) -> Vec2;
    fn kind(&self) -> FamilyKind;
    /// True for families defined as gradients of potentials, where the
    /// cross-partial check is redundant.
    fn exact_gradient(&self) -> bool;
    /// The field the family is declared to start from, evaluated independently of `eval`.
    fn start(&self, z: Vec2) -> Vec2;
    /// The field the family is declared to end at.
    fn end(&self, z: Vec2) -> Vec2;
    /// Named constants computed during construction.
    fn metadata(&self) -> Vec<(&'static str, f64)> {
        Vec::new()
    }
}

/// `t ↦ sign·∇(base + t·delta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialPath {
    pub base: Potential,
    pub delta: Potential,
    pub sign: Sign,
    pub kind: FamilyKind,
    pub meta: Vec<(&'static str, f64)>,
}

impl PotentialPath {
    pub fn field_at(&self, t: f64) -> GradientField {
        GradientField::with_sign(self.base.clone() + self.delta.scaled(t), self.sign)
    }
}

impl HomotopyFamily for PotentialPath {
    fn eval(&self, t: f64, z: Vec2) -> Vec2 {
        (self.base.gradient(z) + self.delta.gradient(z) * t) * self.sign.factor()
    }
    fn kind(&self) -> FamilyKind {
        self.kind
    }
    fn exact_gradient(&self) -> bool {
        true
    }
    fn start(&self, z: Vec2) -> Vec2 {
        self.base.gradient(z) * self.sign.factor()
    }
    fn end(&self, z: Vec2) -> Vec2 {
        (self.base.clone() + self.delta.clone()).gradient(z) * self.sign.factor()
    }
    fn metadata(&self) -> Vec<(&'static str, f64)> {
        self.meta.clone()
    }
}

/// `(1 − t)·f₀ + t·f₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct StraightLine {
    pub f0: GradientField,
    pub f1: GradientField,
}

impl HomotopyFamily for StraightLine {
    fn eval(&self, t: f64, z: Vec2) -> Vec2 {
        self.f0.gradient(z) * (1.0 - t) + self.f1.gradient(z) * t
    }
    fn kind(&self) -> FamilyKind {
        FamilyKind::StraightLine
    }
    fn exact_gradient(&self) -> bool {
        true
    }
    fn start(&self, z: Vec2) -> Vec2 {
        self.f0.gradient(z)
    }
    fn end(&self, z: Vec2) -> Vec2 {
        self.f1.gradient(z)
    }
}

/// Sample layout for [`validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationGrid {
    /// Square `[-half_width, half_width]²` for endpoint and cross-partial checks.
    pub half_width: f64,
    pub n: usize,
    pub t_samples: usize,
    /// Increasing radii of the probe circles where no zero may occur.
    pub probe_radii: Vec<f64>,
    pub circle_samples: usize,
}

impl Default for ValidationGrid {
    fn default() -> Self {
        ValidationGrid {
            half_width: 3.0,
            n: 41,
            t_samples: 11,
            probe_radii: (1..=8).map(|k| 4.0 * k as f64).collect(),
            circle_samples: 180,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub gradient_ok: bool,
    pub zero_compact_ok: bool,
    pub proper_ok: PropernessVerdict,
    pub endpoint_ok: bool,
    /// Largest relative cross-partial residual (0 when skipped as exact).
    pub worst_cross_partial: f64,
    /// Largest `|h(0,z) − start(z)|`, `|h(1,z) − end(z)|` on the grid.
    pub worst_endpoint: f64,
    /// Smallest `|h(t,z)|` on the probe circles.
    pub min_probe_norm: f64,
}

/// Cross-partial tolerance, relative to `1 + ‖Dh‖`.
pub const CROSS_PARTIAL_TOL: f64 = 1e-4;
/// Endpoint fidelity tolerance.
pub const ENDPOINT_TOL: f64 = 1e-8;
/// `|h| below this` on a probe circle counts as a zero.
pub const PROBE_ZERO: f64 = 1e-6;

fn grid_points(half_width: f64, n: usize) -> impl Iterator<Item = Vec2> {
    let n = n.max(2);
    (0..n).flat_map(move |i| {
        (0..n).map(move |j| {
            let u = i as f64 / (n - 1) as f64;
            let v = j as f64 / (n - 1) as f64;
            Vec2::new(-half_width + 2.0 * half_width * u, -half_width + 2.0 * half_width * v)
        })
    })
}

fn t_grid(n: usize) -> impl Iterator<Item = f64> {
    let n = n.max(2);
    (0..n).map(move |k| k as f64 / (n - 1) as f64)
}

/// Relative asymmetry of the finite-difference Jacobian of `h(t, ·)` at `z`.
pub fn cross_partial_residual<H: HomotopyFamily + ?Sized>(h: &H, t: f64, z: Vec2, step: f64) -> f64 {
    let ex = Vec2::new(step, 0.0);
    let ey = Vec2::new(0.0, step);
    let dx = (h.eval(t, z + ex) - h.eval(t, z - ex)) / (2.0 * step);
    let dy = (h.eval(t, z + ey) - h.eval(t, z - ey)) / (2.0 * step);
    let norm = math::sqrt(dx.norm_sq() + dy.norm_sq());
    (dx.y - dy.x).abs() / (1.0 + norm)
}

fn verdict_of(minima: &[f64]) -> PropernessVerdict {
    if minima.is_empty() {
        return PropernessVerdict::Inconclusive;
    }
    let half = &minima[minima.len() / 2..];
    let non_decreasing = half.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9));
    if half[0] > 1e-3 && non_decreasing {
        return PropernessVerdict::ProperLikely;
    }
    let tail = &minima[minima.len().saturating_sub(3)..];
    if tail.iter().all(|&m| m < 1e-3) && tail.windows(2).all(|w| w[1] <= w[0]) {
        return PropernessVerdict::NotProper;
    }
    PropernessVerdict::Inconclusive
}

/// Samples the defining conditions of a proper gradient homotopy.
pub fn validate<H: HomotopyFamily + ?Sized>(h: &H, grid: &ValidationGrid) -> ValidationReport {
    let mut worst_cross = 0.0f64;
    if !h.exact_gradient() {
        for t in t_grid(grid.t_samples) {
            for z in grid_points(grid.half_width, grid.n) {
                worst_cross = worst_cross.max(cross_partial_residual(h, t, z, 1e-5));
            }
        }
    }
    let mut worst_endpoint = 0.0f64;
    for z in grid_points(grid.half_width, grid.n) {
        worst_endpoint = worst_endpoint.max((h.eval(0.0, z) - h.start(z)).norm());
        worst_endpoint = worst_endpoint.max((h.eval(1.0, z) - h.end(z)).norm());
    }
    let mut min_probe = f64::INFINITY;
    let mut verdict = PropernessVerdict::ProperLikely;
    let ns = grid.circle_samples.max(8);
    for t in t_grid(grid.t_samples) {
        let minima: Vec<f64> = grid
            .probe_radii
            .iter()
            .map(|&r| {
                (0..ns)
                    .map(|k| h.eval(t, Vec2::polar(r, TAU * (k as f64 + 0.5) / ns as f64)).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        min_probe = minima.iter().copied().fold(min_probe, f64::min);
        verdict = match (verdict, verdict_of(&minima)) {
            (PropernessVerdict::NotProper, _) | (_, PropernessVerdict::NotProper) => PropernessVerdict::NotProper,
            (PropernessVerdict::Inconclusive, _) | (_, PropernessVerdict::Inconclusive) => {
                PropernessVerdict::Inconclusive
            }
            _ => PropernessVerdict::ProperLikely,
        };
    }
    ValidationReport {
        gradient_ok: worst_cross < CROSS_PARTIAL_TOL,
        zero_compact_ok: min_probe >= PROBE_ZERO,
        proper_ok: verdict,
        endpoint_ok: worst_endpoint < ENDPOINT_TOL,
        worst_cross_partial: worst_cross,
        worst_endpoint,
        min_probe_norm: min_probe,
    }
}

/// `max |h(t,z) − h(0,z)|` over the validation square, for each `t` in `ts`.
pub fn continuity_modulus<H: HomotopyFamily + ?Sized>(h: &H, ts: &[f64], half_width: f64, n: usize) -> Vec<f64> {
    ts.iter()
        .map(|&t| {
            grid_points(half_width, n)
                .map(|z| (h.eval(t, z) - h.eval(0.0, z)).norm())
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Moduli below this count as exact continuity.
pub const CONTINUITY_FLOOR: f64 = 1e-10;

/// The sampled modulus decreases strictly with `t`, or is at roundoff level throughout.
pub fn continuity_holds(modulus: &[f64]) -> bool {
    modulus.iter().all(|&m| m < CONTINUITY_FLOOR) || modulus.windows(2).all(|w| w[1] < w[0])
}
