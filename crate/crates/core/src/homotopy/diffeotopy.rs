//! Radial diffeotopy `θ(t, x) = μ_t(|x|)·x/|x|` shrinking the plane onto
//! the open ball `B_r`, with `μ_t(s) = (1 − t)s + t·(2r/π)·atan s`, and the
//! gradient pullbacks it induces.

use alloc::vec::Vec;

use super::{FamilyKind, HomotopyError, HomotopyFamily};
use crate::field::{Potential, ScalarField};
use crate::flow::CriticalPoint;
use crate::math::{self, Sym2, Vec2, PI, TAU};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArctanDiffeotopy {
    pub r: f64,
}

pub fn arctan_diffeotopy(r: f64) -> ArctanDiffeotopy {
    ArctanDiffeotopy { r }
}

impl ArctanDiffeotopy {
    /// `μ(s) = (2r/π)·atan s`
    pub fn mu(&self, s: f64) -> f64 {
        2.0 * self.r / PI * math::atan(s)
    }

    pub fn mu_t(&self, t: f64, s: f64) -> f64 {
        (1.0 - t) * s + t * self.mu(s)
    }

    pub fn mu_t_prime(&self, t: f64, s: f64) -> f64 {
        (1.0 - t) + t * 2.0 * self.r / (PI * (1.0 + s * s))
    }

    pub fn apply(&self, t: f64, x: Vec2) -> Vec2 {
        let s = x.norm();
        if s == 0.0 {
            return Vec2::ZERO;
        }
        x * (self.mu_t(t, s) / s)
    }

    /// `Dθ_t(x) = (μ_t(s)/s)·I + (μ_t'(s) − μ_t(s)/s)·x̂x̂ᵀ`, symmetric.
    pub fn jacobian(&self, t: f64, x: Vec2) -> Sym2 {
        let s = x.norm();
        let d = self.mu_t_prime(t, s);
        if s < 1e-300 {
            return Sym2::diag(d, d);
        }
        let q = self.mu_t(t, s) / s;
        Sym2::diag(q, q) + Sym2::outer(x, (d - q) / (s * s))
    }

    /// Radius of `θ_t(ℝ²)`: infinite for `t < 1`, `r` at `t = 1`.
    pub fn image_radius(&self, t: f64) -> f64 {
        if t < 1.0 {
            f64::INFINITY
        } else {
            self.r
        }
    }

    /// Solves `μ_t(s) = rho` by safeguarded Newton; `None` outside the image.
    pub fn inverse_radius(&self, t: f64, rho: f64) -> Option<f64> {
        if rho < 0.0 || rho >= self.image_radius(t) {
            return None;
        }
        if rho == 0.0 {
            return Some(0.0);
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        while self.mu_t(t, hi) < rho {
            hi *= 2.0;
            if !hi.is_finite() {
                return None;
            }
        }
        let mut s = 0.5 * (lo + hi);
        for _ in 0..200 {
            let g = self.mu_t(t, s) - rho;
            if g.abs() <= 1e-14 * (1.0 + rho) {
                return Some(s);
            }
            if g > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let step = s - g / self.mu_t_prime(t, s);
            s = if step > lo && step < hi { step } else { 0.5 * (lo + hi) };
        }
        Some(s)
    }

    pub fn inverse(&self, t: f64, z: Vec2) -> Option<Vec2> {
        let rho = z.norm();
        let s = self.inverse_radius(t, rho)?;
        Some(if rho == 0.0 { Vec2::ZERO } else { z * (s / rho) })
    }

    /// Samples monotonicity of `μ_t` and that every sampled radius below `r`
    /// lies in every image `θ_t(ℝ²)`. Returns the failures counted.
    pub fn validate(&self, t_samples: usize, s_samples: usize) -> usize {
        let mut bad = 0;
        for it in 0..t_samples.max(2) {
            let t = it as f64 / (t_samples.max(2) - 1) as f64;
            let mut prev = -1.0;
            for k in 0..s_samples.max(2) {
                let s = 100.0 * k as f64 / s_samples as f64;
                let v = self.mu_t(t, s);
                if !(v > prev) {
                    bad += 1;
                }
                prev = v;
            }
            for k in 0..s_samples.max(2) {
                let rho = self.r * k as f64 / s_samples as f64;
                match self.inverse_radius(t, rho) {
                    Some(s) if (self.mu_t(t, s) - rho).abs() <= 1e-10 * (1.0 + rho) => {}
                    _ => bad += 1,
                }
            }
        }
        bad
    }
}

/// `h(t, x) = Dθ_t(x)ᵀ·∇φ(θ_t(x)) = ∇(φ∘θ_t)(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PullbackFamily {
    pub potential: Potential,
    pub theta: ArctanDiffeotopy,
}

impl HomotopyFamily for PullbackFamily {
    fn eval(&self, t: f64, x: Vec2) -> Vec2 {
        self.theta.jacobian(t, x).mul_vec(self.potential.gradient(self.theta.apply(t, x)))
    }
    fn kind(&self) -> FamilyKind {
        FamilyKind::Pullback
    }
    fn exact_gradient(&self) -> bool {
        true
    }
    fn start(&self, x: Vec2) -> Vec2 {
        self.potential.gradient(x)
    }
    fn end(&self, x: Vec2) -> Vec2 {
        let s = x.norm();
        if s == 0.0 {
            return self.potential.gradient(Vec2::ZERO) * (2.0 * self.theta.r / PI);
        }
        let m = self.theta.mu(s);
        let d = 2.0 * self.theta.r / (PI * (1.0 + s * s));
        let u = x / s;
        let g = self.potential.gradient(u * m);
        let radial = u * g.dot(u);
        radial * d + (g - radial) * (m / s)
    }
    fn metadata(&self) -> Vec<(&'static str, f64)> {
        alloc::vec![("r", self.theta.r)]
    }
}

/// Requires every zero of `∇φ` to lie in `θ_1(ℝ²) = B_r`.
pub fn pullback_homotopy(
    potential: &Potential,
    theta: ArctanDiffeotopy,
    zeros: &[CriticalPoint],
) -> Result<PullbackFamily, HomotopyError> {
    if let Some(p) = zeros.iter().find(|p| p.position.norm() >= theta.r) {
        return Err(HomotopyError::ZeroEscapesImage { x: p.position.x, y: p.position.y });
    }
    Ok(PullbackFamily { potential: potential.clone(), theta })
}

/// `h(t, x) = Dγ(x)ᵀ·∇ζ(t, γ(x))` with `γ = θ_1` mapping the plane onto
/// `B_r`, for a caller-supplied gradient `∇_x ζ` nonvanishing on `∂D_r`.
pub struct ZetaPullback<Z: Fn(f64, Vec2) -> Vec2> {
    pub gamma: ArctanDiffeotopy,
    pub zeta_gradient: Z,
}

impl<Z: Fn(f64, Vec2) -> Vec2> ZetaPullback<Z> {
    pub fn new(r: f64, zeta_gradient: Z) -> Result<Self, HomotopyError> {
        let gamma = ArctanDiffeotopy { r };
        for it in 0..=20 {
            let t = it as f64 / 20.0;
            for k in 0..360 {
                if zeta_gradient(t, Vec2::polar(r, TAU * k as f64 / 360.0)).norm() < 1e-9 {
                    return Err(HomotopyError::ZetaVanishes);
                }
            }
        }
        Ok(ZetaPullback { gamma, zeta_gradient })
    }
}

impl<Z: Fn(f64, Vec2) -> Vec2> HomotopyFamily for ZetaPullback<Z> {
    fn eval(&self, t: f64, x: Vec2) -> Vec2 {
        self.gamma.jacobian(1.0, x).mul_vec((self.zeta_gradient)(t, self.gamma.apply(1.0, x)))
    }
    fn kind(&self) -> FamilyKind {
        FamilyKind::Pullback
    }
    fn exact_gradient(&self) -> bool {
        false
    }
    fn start(&self, x: Vec2) -> Vec2 {
        self.eval(0.0, x)
    }
    fn end(&self, x: Vec2) -> Vec2 {
        self.eval(1.0, x)
    }
}
