//! Rescaling homotopy from a field with a unique nondegenerate zero to its
//! linearization: `h(t, x) = f(p + t·x)/t`, `h(0, x) = H·x`.

use alloc::vec::Vec;

use super::{FamilyKind, HomotopyError, HomotopyFamily};
use crate::field::{GradientField, ScalarField};
use crate::flow::{find_critical_points, ZERO_TOL};
use crate::math::{Rect, Sym2, Vec2, TAU};

/// Constants of the properness argument, located by sampling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MilnorConstants {
    /// Target bound: `|h(t,x)| > m` for `|x| > l`.
    pub m: f64,
    /// `|H x| ≥ ε|x|`.
    pub epsilon: f64,
    /// `|f(p+x) − Hx| ≤ ε|x|/2` for `|x| < δ₁`.
    pub delta1: f64,
    /// `|f(p+x)| > m₁` for `|x| ≥ δ₁`, with `m₁ < m`.
    pub m1: f64,
    /// `|f(p+x)| > m` for `|x| ≥ δ₂`.
    pub delta2: f64,
    pub t1: f64,
    pub l: f64,
    /// Smallest `|h(t,x)|` sampled with `|x| > l`.
    pub sampled_min: f64,
}

impl MilnorConstants {
    pub fn bound_holds(&self) -> bool {
        self.sampled_min > self.m
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MilnorFamily {
    pub field: GradientField,
    pub center: Vec2,
    pub hessian: Sym2,
    pub constants: MilnorConstants,
}

impl HomotopyFamily for MilnorFamily {
    fn eval(&self, t: f64, x: Vec2) -> Vec2 {
        if t == 0.0 {
            self.hessian.mul_vec(x)
        } else {
            self.field.gradient(self.center + x * t) / t
        }
    }
    fn kind(&self) -> FamilyKind {
        FamilyKind::Milnor
    }
    fn exact_gradient(&self) -> bool {
        false
    }
    fn start(&self, x: Vec2) -> Vec2 {
        self.hessian.mul_vec(x)
    }
    fn end(&self, x: Vec2) -> Vec2 {
        self.field.gradient(self.center + x)
    }
    fn metadata(&self) -> Vec<(&'static str, f64)> {
        let c = &self.constants;
        alloc::vec![
            ("m", c.m),
            ("epsilon", c.epsilon),
            ("delta1", c.delta1),
            ("m1", c.m1),
            ("delta2", c.delta2),
            ("t1", c.t1),
            ("l", c.l),
            ("sampled_min", c.sampled_min),
        ]
    }
}

const ANGLES: usize = 64;

fn circle_min(f: &GradientField, p: Vec2, r: f64) -> f64 {
    (0..ANGLES)
        .map(|k| f.gradient(p + Vec2::polar(r, TAU * (k as f64 + 0.5) / ANGLES as f64)).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Builds the family at the zero `p` of `f` and locates its constants for the bound `m`.
pub fn milnor_homotopy(f: &GradientField, p: Vec2, m: f64) -> Result<MilnorFamily, HomotopyError> {
    let norm = f.gradient(p).norm();
    if norm >= ZERO_TOL {
        return Err(HomotopyError::NotAZero { norm });
    }
    let h = f.hessian(p);
    let epsilon = h.to_mat().min_singular();
    if !(epsilon > 1e-12 * (1.0 + h.frobenius_sq())) {
        return Err(HomotopyError::SingularHessian);
    }
    // δ₁: halve from 1 until the linearization error bound holds on sampled circles.
    let mut delta1 = 1.0;
    let lin_ok = |d: f64| {
        (1..=8).all(|j| {
            let r = d * j as f64 / 8.0;
            (0..ANGLES).all(|k| {
                let x = Vec2::polar(r, TAU * (k as f64 + 0.5) / ANGLES as f64);
                (f.gradient(p + x) - h.mul_vec(x)).norm() <= 0.5 * epsilon * r
            })
        })
    };
    let mut found = false;
    for _ in 0..60 {
        if lin_ok(delta1) {
            found = true;
            break;
        }
        delta1 *= 0.5;
    }
    if !found {
        return Err(HomotopyError::ConstantsNotFound);
    }
    // Radii out to where |f| exceeds m for good.
    let radii: Vec<f64> = (0..=200).map(|k| delta1 * crate::math::pow(1.08, k as f64)).collect();
    let minima: Vec<f64> = radii.iter().map(|&r| circle_min(f, p, r)).collect();
    let idx = (0..radii.len()).find(|&i| minima[i..].iter().all(|&v| v > m)).ok_or(HomotopyError::ConstantsNotFound)?;
    if idx + 1 == radii.len() {
        return Err(HomotopyError::ConstantsNotFound);
    }
    let delta2 = radii[idx];
    // Only one zero inside the disc of radius δ₂, where all zeros must lie.
    let search = find_critical_points(f, Rect::new(p - Vec2::new(delta2, delta2), p + Vec2::new(delta2, delta2)), 24, 1e-12)
        .map_err(|_| HomotopyError::ConstantsNotFound)?;
    if search.points.len() != 1 {
        return Err(HomotopyError::MultipleZeros { count: search.points.len() });
    }
    let sampled_floor = minima.iter().copied().fold(f64::INFINITY, f64::min);
    let m1 = (0.9 * sampled_floor).min(0.5 * m);
    if !(m1 > 0.0) {
        return Err(HomotopyError::ConstantsNotFound);
    }
    let t1 = m1 / m;
    let l = (delta2 / t1).max(2.0 * m / epsilon);
    let mut fam = MilnorFamily {
        field: f.clone(),
        center: p,
        hessian: h,
        constants: MilnorConstants { m, epsilon, delta1, m1, delta2, t1, l, sampled_min: 0.0 },
    };
    let mut ts: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
    ts.extend([1e-2, 1e-3, 1e-4, 0.5 * t1, t1]);
    let mut sampled_min = f64::INFINITY;
    for &t in &ts {
        for s in [1.01, 1.5, 2.0, 4.0] {
            for k in 0..ANGLES {
                let x = Vec2::polar(s * l, TAU * (k as f64 + 0.5) / ANGLES as f64);
                sampled_min = sampled_min.min(fam.eval(t, x).norm());
            }
        }
    }
    fam.constants.sampled_min = sampled_min;
    Ok(fam)
}
