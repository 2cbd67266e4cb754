//! Homotopies between zero-free proper gradient fields: a radial push
//! that compactifies `f` to the pushed constant field `Ξ_{1/2}(f(0))`, and
//! paths through nonzero constants.

use alloc::vec::Vec;

use super::{FamilyKind, HomotopyError, HomotopyFamily};
use crate::field::{GradientField, ScalarField};
use crate::math::{self, Sym2, Vec2, TAU};

/// `ξ_s(x) = (1 + s|x|)·x`.
pub fn xi(s: f64, x: Vec2) -> Vec2 {
    x * (1.0 + s * x.norm())
}

/// `Dξ_s(x) = (1 + s|x|)·I + s·x xᵀ/|x|` (symmetric).
pub fn xi_jacobian(s: f64, x: Vec2) -> Sym2 {
    let r = x.norm();
    let base = Sym2::diag(1.0 + s * r, 1.0 + s * r);
    if r == 0.0 {
        base
    } else {
        base + Sym2::outer(x, s / r)
    }
}

/// `Ξ_s(g)(x) = Dξ_s(x)ᵀ·g(ξ_s(x))`.
fn pushed(s: f64, x: Vec2, g: impl Fn(Vec2) -> Vec2) -> Vec2 {
    xi_jacobian(s, x).mul_vec(g(xi(s, x)))
}

/// `h_t = Ξ_t(f)` on `[0, ½]`, `Ξ_{1/2}(f((2 − 2t)·))` on `[½, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialPush {
    pub field: GradientField,
    /// Probe-grid estimate of `min |f|`.
    pub c: f64,
}

impl HomotopyFamily for RadialPush {
    fn eval(&self, t: f64, x: Vec2) -> Vec2 {
        if t <= 0.5 {
            pushed(t, x, |w| self.field.gradient(w))
        } else {
            let k = 2.0 - 2.0 * t;
            pushed(0.5, x, |w| self.field.gradient(w * k))
        }
    }
    fn kind(&self) -> FamilyKind {
        FamilyKind::RadialPush
    }
    fn exact_gradient(&self) -> bool {
        false
    }
    fn start(&self, x: Vec2) -> Vec2 {
        self.field.gradient(x)
    }
    fn end(&self, x: Vec2) -> Vec2 {
        xi_jacobian(0.5, x).mul_vec(self.field.gradient(Vec2::ZERO))
    }
    fn metadata(&self) -> Vec<(&'static str, f64)> {
        alloc::vec![("c", self.c)]
    }
}

/// Probe-grid minimum of `|f|` over a `201×201` grid on `[-r, r]²` and
/// circles out to `8r`.
fn probe_min(f: &GradientField, r: f64) -> f64 {
    let n = 201;
    let mut m = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            let z = Vec2::new(-r + 2.0 * r * i as f64 / (n - 1) as f64, -r + 2.0 * r * j as f64 / (n - 1) as f64);
            m = m.min(f.gradient(z).norm());
        }
    }
    for k in 1..=8 {
        for a in 0..256 {
            m = m.min(f.gradient(Vec2::polar(r * k as f64, TAU * a as f64 / 256.0)).norm());
        }
    }
    m
}

pub fn radial_push_homotopy(f: &GradientField) -> Result<RadialPush, HomotopyError> {
    let c = probe_min(f, 10.0);
    if !(c > 1e-6) {
        return Err(HomotopyError::HasZero { min_norm: c });
    }
    Ok(RadialPush { field: f.clone(), c })
}

/// Worst slacks of the four push inequalities over a sample grid; each is
/// `lhs − rhs`, so nonnegative means the inequality holds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PushInequalities {
    /// `|ξ_s(x)| ≥ |x|`
    pub radial_growth: f64,
    /// `|Dξ_sᵀ(x)v| ≥ (1 + s|x|)|v|`
    pub jacobian_floor: f64,
    /// `|Ξ_s(f)(x)| ≥ |f(ξ_s(x))|`
    pub pushed_floor: f64,
    /// `|Ξ_{1/2}(f_t)(x)| ≥ (1 + |x|/2)·c` for `t ∈ [½, 1]`
    pub compact_floor: f64,
}

impl PushInequalities {
    pub fn worst(&self) -> f64 {
        self.radial_growth.min(self.jacobian_floor).min(self.pushed_floor).min(self.compact_floor)
    }
}

impl RadialPush {
    /// Checks the four inequalities on an `n×n` grid over `[-half, half]²`
    /// crossed with `nt` equally spaced values of `t ∈ [0, 1]`.
    pub fn check_inequalities(&self, half: f64, n: usize, nt: usize) -> PushInequalities {
        let mut out = PushInequalities {
            radial_growth: f64::INFINITY,
            jacobian_floor: f64::INFINITY,
            pushed_floor: f64::INFINITY,
            compact_floor: f64::INFINITY,
        };
        let probes = [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(0.6, -0.8), Vec2::new(-0.28, 0.96)];
        let n = n.max(2);
        let nt = nt.max(2);
        for it in 0..nt {
            let t = it as f64 / (nt - 1) as f64;
            let s = t.min(0.5);
            for i in 0..n {
                for j in 0..n {
                    let x = Vec2::new(
                        -half + 2.0 * half * i as f64 / (n - 1) as f64,
                        -half + 2.0 * half * j as f64 / (n - 1) as f64,
                    );
                    let r = x.norm();
                    out.radial_growth = out.radial_growth.min(xi(s, x).norm() - r);
                    let d = xi_jacobian(s, x);
                    for v in probes {
                        out.jacobian_floor = out.jacobian_floor.min(d.mul_vec(v).norm() - (1.0 + s * r) * v.norm());
                    }
                    if t <= 0.5 {
                        let lhs = self.eval(t, x).norm();
                        let rhs = self.field.gradient(xi(s, x)).norm();
                        out.pushed_floor = out.pushed_floor.min(lhs - rhs);
                    }
                    if t >= 0.5 {
                        let lhs = self.eval(t, x).norm();
                        out.compact_floor = out.compact_floor.min(lhs - (1.0 + 0.5 * r) * self.c);
                    }
                }
            }
        }
        out
    }
}

/// `t ↦ Ξ_{1/2}(g_t)` for a path `g_t` of nonzero constants that scales
/// log-linearly in magnitude and rotates by the signed angle in `(-π, π]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantConnect {
    pub c0: Vec2,
    pub c1: Vec2,
    angle0: f64,
    turn: f64,
}

impl ConstantConnect {
    /// The constant `g_t` itself.
    pub fn constant(&self, t: f64) -> Vec2 {
        let r = math::exp((1.0 - t) * math::ln(self.c0.norm()) + t * math::ln(self.c1.norm()));
        if t == 0.0 {
            return self.c0;
        }
        if t == 1.0 {
            return self.c1;
        }
        Vec2::polar(r, self.angle0 + t * self.turn)
    }

    pub fn turn(&self) -> f64 {
        self.turn
    }
}

impl HomotopyFamily for ConstantConnect {
    fn eval(&self, t: f64, x: Vec2) -> Vec2 {
        xi_jacobian(0.5, x).mul_vec(self.constant(t))
    }
    fn kind(&self) -> FamilyKind {
        FamilyKind::ConstantConnect
    }
    fn exact_gradient(&self) -> bool {
        false
    }
    fn start(&self, x: Vec2) -> Vec2 {
        xi_jacobian(0.5, x).mul_vec(self.c0)
    }
    fn end(&self, x: Vec2) -> Vec2 {
        xi_jacobian(0.5, x).mul_vec(self.c1)
    }
    fn metadata(&self) -> Vec<(&'static str, f64)> {
        alloc::vec![("turn", self.turn)]
    }
}

pub fn connect_constants(c0: Vec2, c1: Vec2) -> Result<ConstantConnect, HomotopyError> {
    if !(c0.norm() > 0.0) || !(c1.norm() > 0.0) || !c0.is_finite() || !c1.is_finite() {
        return Err(HomotopyError::ZeroConstant);
    }
    let angle0 = c0.angle();
    let mut turn = math::wrap_pi(c1.angle() - angle0);
    if turn <= -core::f64::consts::PI + 1e-15 {
        turn = core::f64::consts::PI;
    }
    Ok(ConstantConnect { c0, c1, angle0, turn })
}
