//! Nonvanishing gradient extension to the unit square of boundary data
//! `w = (0, 1)` on the vertical sides, `(0, w′(x))` at the bottom and
//! `(0, w″(x))` at the top.

use super::HomotopyError;
use crate::math::{smoothstep, smoothstep_integral, Vec2};

/// A `C¹` function on `[0, 1]` with its derivative.
pub trait Profile {
    fn value(&self, x: f64) -> f64;
    fn slope(&self, x: f64) -> f64;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstProfile(pub f64);

impl Profile for ConstProfile {
    fn value(&self, _: f64) -> f64 {
        self.0
    }
    fn slope(&self, _: f64) -> f64 {
        0.0
    }
}

#[derive(Clone, Copy, Debug)]
pub struct FnProfile<F, G> {
    pub value: F,
    pub slope: G,
}

impl<F: Fn(f64) -> f64, G: Fn(f64) -> f64> Profile for FnProfile<F, G> {
    fn value(&self, x: f64) -> f64 {
        (self.value)(x)
    }
    fn slope(&self, x: f64) -> f64 {
        (self.slope)(x)
    }
}

impl<P: Profile + ?Sized> Profile for &P {
    fn value(&self, x: f64) -> f64 {
        (**self).value(x)
    }
    fn slope(&self, x: f64) -> f64 {
        (**self).slope(x)
    }
}

/// `μ(s) = 1 − S(s/s₀)` on `[0, s₀]`, `−D·4τ(1 − τ)` with
/// `τ = (s − s₀)/(1 − s₀)` on `[s₀, 1]`, where `S` is the quintic
/// smoothstep, `D = min(1/m, 1)` and `s₀ = 4D/(3 + 4D)` makes `∫μ = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquareProfile {
    pub depth: f64,
    pub split: f64,
}

impl SquareProfile {
    pub fn new(m: f64) -> Result<Self, HomotopyError> {
        if !(m > 0.0) || !m.is_finite() {
            return Err(HomotopyError::ProfileInfeasible { reason: "max of boundary data must be positive" });
        }
        let depth = (1.0 / m).min(1.0);
        Ok(SquareProfile { depth, split: 4.0 * depth / (3.0 + 4.0 * depth) })
    }

    pub fn mu(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        if s <= self.split {
            1.0 - smoothstep(s / self.split)
        } else {
            let tau = (s - self.split) / (1.0 - self.split);
            -self.depth * 4.0 * tau * (1.0 - tau)
        }
    }

    /// `M(s) = ∫₀ˢ μ`.
    pub fn integral(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, 1.0);
        let s0 = self.split;
        if s <= s0 {
            s - s0 * smoothstep_integral(s / s0)
        } else {
            let tau = (s - s0) / (1.0 - s0);
            0.5 * s0 - self.depth * (1.0 - s0) * (2.0 * tau * tau - 4.0 / 3.0 * tau * tau * tau)
        }
    }
}

fn a(x: f64) -> f64 {
    x * (1.0 - x)
}

#[derive(Clone, Debug)]
pub struct SquareExtension<P, Q> {
    pub bottom: P,
    pub top: Q,
    pub profile: SquareProfile,
    /// `max(w′, w″)` over the sampled interval.
    pub m: f64,
}

impl<P: Profile, Q: Profile> SquareExtension<P, Q> {
    /// `(u, ∂u/∂x, ∂u/∂y)` for `u(x, y) = ∫₀ʸ μ(t/a(x)) dt = a·M(y/a)` on `y ≤ a(x)`.
    fn u(&self, x: f64, y: f64) -> (f64, f64, f64) {
        let ax = a(x);
        if ax <= 0.0 {
            return (0.0, 0.0, 0.0);
        }
        let s = y / ax;
        let mu = self.profile.mu(s);
        let big = self.profile.integral(s);
        (ax * big, (1.0 - 2.0 * x) * (big - s * mu), mu)
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        let ax = a(x);
        if y <= ax {
            y + (self.bottom.value(x) - 1.0) * self.u(x, y).0
        } else if y >= 1.0 - ax {
            y + (1.0 - self.top.value(x)) * self.u(x, 1.0 - y).0
        } else {
            y
        }
    }

    pub fn gradient(&self, x: f64, y: f64) -> Vec2 {
        let ax = a(x);
        if y <= ax {
            let (u, ux, uy) = self.u(x, y);
            let c = self.bottom.value(x) - 1.0;
            Vec2::new(self.bottom.slope(x) * u + c * ux, 1.0 + c * uy)
        } else if y >= 1.0 - ax {
            let (u, ux, uy) = self.u(x, 1.0 - y);
            let c = 1.0 - self.top.value(x);
            Vec2::new(-self.top.slope(x) * u + c * ux, 1.0 - c * uy)
        } else {
            Vec2::new(0.0, 1.0)
        }
    }

    /// Largest `|∇ψ − w|` over `n` samples per side, corners excluded.
    pub fn boundary_residual(&self, n: usize) -> f64 {
        let mut worst = 0.0f64;
        for k in 1..n {
            let s = k as f64 / n as f64;
            let side = Vec2::new(0.0, 1.0);
            worst = worst.max((self.gradient(0.0, s) - side).norm());
            worst = worst.max((self.gradient(1.0, s) - side).norm());
            worst = worst.max((self.gradient(s, 0.0) - Vec2::new(0.0, self.bottom.value(s))).norm());
            worst = worst.max((self.gradient(s, 1.0) - Vec2::new(0.0, self.top.value(s))).norm());
        }
        worst
    }

    /// Largest disagreement at the corners between the side value `(0, 1)`
    /// and the bottom/top values. Zero only when `w′, w″` equal 1 at both ends.
    pub fn corner_mismatch(&self) -> f64 {
        [self.bottom.value(0.0), self.bottom.value(1.0), self.top.value(0.0), self.top.value(1.0)]
            .iter()
            .map(|v| (v - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Smallest `∂ψ/∂y` on the interior `n×n` grid.
    pub fn min_dy(&self, n: usize) -> f64 {
        let mut m = f64::INFINITY;
        for i in 0..n {
            for j in 0..n {
                let x = (i as f64 + 0.5) / n as f64;
                let y = (j as f64 + 0.5) / n as f64;
                m = m.min(self.gradient(x, y).y);
            }
        }
        m
    }
}

pub fn square_extension<P: Profile, Q: Profile>(bottom: P, top: Q) -> Result<SquareExtension<P, Q>, HomotopyError> {
    let m = (0..=1000)
        .map(|k| {
            let x = k as f64 / 1000.0;
            bottom.value(x).max(top.value(x))
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let profile = SquareProfile::new(m)?;
    Ok(SquareExtension { bottom, top, profile, m })
}
