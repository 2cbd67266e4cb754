//! Closed-form potentials with exact gradients and Hessians.
//!
//! A [`Potential`] is a finite sum of [`PotentialTerm`]s. Every term is C² on
//! the whole plane and knows its own first and second derivatives, so the
//! field `∇φ` and its Jacobian are never approximated.

use alloc::vec::Vec;
use core::ops::{Add, Neg};

use crate::math::{self, powi, smoothstep, smoothstep_d1, smoothstep_d2, smoothstep_integral};
use crate::math::{Sym2, Vec2, TAU};

/// Anything with a C² value, exact gradient, and exact Hessian.
pub trait ScalarField {
    fn value(&self, z: Vec2) -> f64;
    fn gradient(&self, z: Vec2) -> Vec2;
    fn hessian(&self, z: Vec2) -> Sym2;
}

impl<T: ScalarField + ?Sized> ScalarField for &T {
    fn value(&self, z: Vec2) -> f64 {
        (**self).value(z)
    }
    fn gradient(&self, z: Vec2) -> Vec2 {
        (**self).gradient(z)
    }
    fn hessian(&self, z: Vec2) -> Sym2 {
        (**self).hessian(z)
    }
}

/// Localized additive correction along a straight tube, used to cancel a
/// source/saddle pair. In tube coordinates `ξ` (along the axis, `-1` at the
/// saddle and `+1` at the source) and `v` (signed transverse distance) the
/// term is `g(ξ)·χ(v)`: `g` rises to a plateau of slope one on `[-1, 1]`,
/// returns to zero through a negative lobe placed beyond the source, and `χ`
/// is a C² transverse cutoff.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TubeTemplate {
    /// Tube midpoint, where `ξ = 0`.
    pub origin: Vec2,
    /// Unit vector pointing from the saddle end toward the source end.
    pub axis: Vec2,
    /// Half the distance between the two ends (`ξ = 1` at `origin + half_len·axis`).
    pub half_len: f64,
    /// `χ = 1` for `|v| ≤ v_core`.
    pub v_core: f64,
    /// `χ = 0` for `|v| ≥ v_outer`.
    pub v_outer: f64,
    /// Width of the smooth ramps on either side of the plateau, in `ξ` units.
    pub ramp: f64,
    /// Centre of the negative lobe, in `ξ` units (`≥ 1 + ramp + lobe_half_width`).
    pub lobe_center: f64,
    pub lobe_half_width: f64,
}

impl TubeTemplate {
    /// Area under the nonnegative part of `g'`.
    fn positive_area(&self) -> f64 {
        2.0 + self.ramp
    }

    fn lobe_depth(&self) -> f64 {
        self.positive_area() * 35.0 / (32.0 * self.lobe_half_width)
    }

    /// Support of the correction along the axis, in `ξ` units.
    pub fn xi_support(&self) -> (f64, f64) {
        (-1.0 - self.ramp, self.lobe_center + self.lobe_half_width)
    }

    /// Tube coordinates `(ξ, v)`.
    pub fn coords(&self, z: Vec2) -> (f64, f64) {
        let d = z - self.origin;
        (d.dot(self.axis) / self.half_len, d.dot(self.axis.perp()))
    }

    /// Inverse of [`TubeTemplate::coords`].
    pub fn point(&self, xi: f64, v: f64) -> Vec2 {
        self.origin + self.axis * (xi * self.half_len) + self.axis.perp() * v
    }

    /// `g`, `g'`, `g''` in `ξ`.
    pub fn profile(&self, xi: f64) -> (f64, f64, f64) {
        let a = self.ramp;
        let p = self.positive_area();
        let (lo, hi) = self.xi_support();
        if xi <= lo || xi >= hi {
            return (0.0, 0.0, 0.0);
        }
        if xi < -1.0 {
            let t = (xi - lo) / a;
            return (a * smoothstep_integral(t), smoothstep(t), smoothstep_d1(t) / a);
        }
        if xi <= 1.0 {
            return (0.5 * a + (xi + 1.0), 1.0, 0.0);
        }
        if xi < 1.0 + a {
            let t = (xi - 1.0) / a;
            return (
                0.5 * a + 2.0 + a * (t - smoothstep_integral(t)),
                1.0 - smoothstep(t),
                -smoothstep_d1(t) / a,
            );
        }
        let w = self.lobe_half_width;
        if xi <= self.lobe_center - w {
            return (p, 0.0, 0.0);
        }
        let t = (xi - self.lobe_center) / w;
        let depth = self.lobe_depth();
        let q = 1.0 - t * t;
        let ib = |s: f64| s - s * s * s + 0.6 * powi(s, 5) - powi(s, 7) / 7.0;
        let g = p - depth * w * (ib(t) - ib(-1.0));
        (g, -depth * q * q * q, 6.0 * depth * t * q * q / w)
    }

    /// `χ`, `χ'`, `χ''` in `v`.
    pub fn cutoff(&self, v: f64) -> (f64, f64, f64) {
        let dv = self.v_outer - self.v_core;
        let t = (v.abs() - self.v_core) / dv;
        let s = if v < 0.0 { -1.0 } else { 1.0 };
        (
            1.0 - smoothstep(t),
            -s * smoothstep_d1(t) / dv,
            -smoothstep_d2(t) / (dv * dv),
        )
    }

    /// Largest value of `g`.
    pub fn profile_max(&self) -> f64 {
        self.positive_area()
    }

    /// Largest magnitude of `g'` on the negative lobe.
    pub fn lobe_slope_max(&self) -> f64 {
        self.lobe_depth()
    }

    pub fn in_support(&self, z: Vec2) -> bool {
        let (xi, v) = self.coords(z);
        let (lo, hi) = self.xi_support();
        xi > lo && xi < hi && v.abs() < self.v_outer
    }

    fn eval(&self, z: Vec2) -> (f64, Vec2, Sym2) {
        let (xi, v) = self.coords(z);
        let (g, g1, g2) = self.profile(xi);
        let (c, c1, c2) = self.cutoff(v);
        let k = 1.0 / self.half_len;
        let e = self.axis;
        let n = self.axis.perp();
        let value = g * c;
        let grad = e * (g1 * k * c) + n * (g * c1);
        let hess = Sym2::outer(e, g2 * k * k * c) + Sym2::sym_outer(e, n, g1 * k * c1) + Sym2::outer(n, g * c2);
        (value, grad, hess)
    }
}

/// One closed-form building block of a potential.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PotentialTerm {
    /// `coeff · xⁱ · yʲ`
    Monomial { coeff: f64, i: u32, j: u32 },
    /// `amp · exp(−|z − center|² / (2σ²))`
    GaussBump { amp: f64, center: Vec2, sigma: f64 },
    /// `coeff · |z|^(2p)`, `p ≥ 1`
    RadialPower { coeff: f64, p: u32 },
    /// `amp · (1 − |z − center|²/radius²)³` inside the disc, zero outside.
    CompactBump { amp: f64, center: Vec2, radius: f64 },
    /// `amp · g(ξ) · χ(v)` for a [`TubeTemplate`].
    Tube { amp: f64, template: TubeTemplate },
}

impl PotentialTerm {
    pub fn monomial(coeff: f64, i: u32, j: u32) -> Self {
        PotentialTerm::Monomial { coeff, i, j }
    }

    pub fn gauss(amp: f64, center: Vec2, sigma: f64) -> Self {
        debug_assert!(sigma > 0.0);
        PotentialTerm::GaussBump { amp, center, sigma }
    }

    pub fn radial(coeff: f64, p: u32) -> Self {
        debug_assert!(p >= 1);
        PotentialTerm::RadialPower { coeff, p }
    }

    /// Checks the parameter constraints of the variant.
    pub fn is_well_formed(&self) -> bool {
        match *self {
            PotentialTerm::Monomial { coeff, .. } => coeff.is_finite(),
            PotentialTerm::GaussBump { amp, center, sigma } => {
                amp.is_finite() && center.is_finite() && sigma.is_finite() && sigma > 0.0
            }
            PotentialTerm::RadialPower { coeff, p } => coeff.is_finite() && p >= 1,
            PotentialTerm::CompactBump { amp, center, radius } => {
                amp.is_finite() && center.is_finite() && radius.is_finite() && radius > 0.0
            }
            PotentialTerm::Tube { amp, template } => {
                amp.is_finite()
                    && template.half_len > 0.0
                    && template.v_outer > template.v_core
                    && template.v_core >= 0.0
                    && template.lobe_half_width > 0.0
                    && template.ramp > 0.0
                    && template.lobe_center - template.lobe_half_width >= 1.0 + template.ramp
            }
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        match *self {
            PotentialTerm::Monomial { coeff, i, j } => PotentialTerm::Monomial { coeff: coeff * s, i, j },
            PotentialTerm::GaussBump { amp, center, sigma } => PotentialTerm::GaussBump { amp: amp * s, center, sigma },
            PotentialTerm::RadialPower { coeff, p } => PotentialTerm::RadialPower { coeff: coeff * s, p },
            PotentialTerm::CompactBump { amp, center, radius } => PotentialTerm::CompactBump { amp: amp * s, center, radius },
            PotentialTerm::Tube { amp, template } => PotentialTerm::Tube { amp: amp * s, template },
        }
    }

    /// Value, gradient and Hessian in one pass.
    pub fn eval(&self, z: Vec2) -> (f64, Vec2, Sym2) {
        match *self {
            PotentialTerm::Monomial { coeff, i, j } => {
                let (x, y) = (z.x, z.y);
                let xi = powi(x, i);
                let yj = powi(y, j);
                let dxi = if i >= 1 { i as f64 * powi(x, i - 1) } else { 0.0 };
                let dyj = if j >= 1 { j as f64 * powi(y, j - 1) } else { 0.0 };
                let ddxi = if i >= 2 { (i * (i - 1)) as f64 * powi(x, i - 2) } else { 0.0 };
                let ddyj = if j >= 2 { (j * (j - 1)) as f64 * powi(y, j - 2) } else { 0.0 };
                (
                    coeff * xi * yj,
                    Vec2::new(coeff * dxi * yj, coeff * xi * dyj),
                    Sym2::new(coeff * ddxi * yj, coeff * dxi * dyj, coeff * xi * ddyj),
                )
            }
            PotentialTerm::GaussBump { amp, center, sigma } => {
                let d = z - center;
                let s2 = sigma * sigma;
                let e = amp * math::exp(-d.norm_sq() / (2.0 * s2));
                (
                    e,
                    d * (-e / s2),
                    Sym2::outer(d, e / (s2 * s2)) - Sym2::IDENTITY.scale(e / s2),
                )
            }
            PotentialTerm::RadialPower { coeff, p } => {
                let s = z.norm_sq();
                let value = coeff * powi(s, p);
                let sp1 = powi(s, p - 1);
                let grad = z * (2.0 * coeff * p as f64 * sp1);
                let mut hess = Sym2::IDENTITY.scale(2.0 * coeff * p as f64 * sp1);
                if p >= 2 {
                    hess += Sym2::outer(z, 4.0 * coeff * (p * (p - 1)) as f64 * powi(s, p - 2));
                }
                (value, grad, hess)
            }
            PotentialTerm::CompactBump { amp, center, radius } => {
                let d = z - center;
                let r2 = radius * radius;
                let q = 1.0 - d.norm_sq() / r2;
                if q <= 0.0 {
                    return (0.0, Vec2::ZERO, Sym2::ZERO);
                }
                let k = -6.0 * amp / r2;
                (
                    amp * q * q * q,
                    d * (k * q * q),
                    Sym2::IDENTITY.scale(k * q * q) + Sym2::outer(d, -4.0 * k * q / r2),
                )
            }
            PotentialTerm::Tube { amp, template } => {
                let (v, g, h) = template.eval(z);
                (amp * v, g * amp, h.scale(amp))
            }
        }
    }
}

/// Finite sum of closed-form terms.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Potential {
    pub terms: Vec<PotentialTerm>,
}

impl Potential {
    pub fn new(terms: Vec<PotentialTerm>) -> Self {
        Potential { terms }
    }

    /// `½(x² + y²)`, whose gradient is the identity.
    pub fn identity() -> Self {
        Potential::new(alloc::vec![PotentialTerm::monomial(0.5, 2, 0), PotentialTerm::monomial(0.5, 0, 2)])
    }

    /// `½(x² − y²)`, the linear saddle.
    pub fn saddle() -> Self {
        Potential::new(alloc::vec![PotentialTerm::monomial(0.5, 2, 0), PotentialTerm::monomial(-0.5, 0, 2)])
    }

    /// `(x² − 1)² + y²`: sources at `(±1, 0)` and a saddle at the origin.
    pub fn double_well() -> Self {
        Potential::new(alloc::vec![
            PotentialTerm::monomial(1.0, 4, 0),
            PotentialTerm::monomial(-2.0, 2, 0),
            PotentialTerm::monomial(1.0, 0, 0),
            PotentialTerm::monomial(1.0, 0, 2),
        ])
    }

    /// `c·x + d·y`, a constant field.
    pub fn linear(c: Vec2) -> Self {
        Potential::new(alloc::vec![PotentialTerm::monomial(c.x, 1, 0), PotentialTerm::monomial(c.y, 0, 1)])
    }

    pub fn push(&mut self, t: PotentialTerm) {
        self.terms.push(t);
    }

    pub fn with(mut self, t: PotentialTerm) -> Self {
        self.terms.push(t);
        self
    }

    pub fn scaled(&self, s: f64) -> Self {
        Potential::new(self.terms.iter().map(|t| t.scaled(s)).collect())
    }

    pub fn is_well_formed(&self) -> bool {
        self.terms.iter().all(PotentialTerm::is_well_formed)
    }

    pub fn eval_all(&self, z: Vec2) -> (f64, Vec2, Sym2) {
        let mut v = 0.0;
        let mut g = Vec2::ZERO;
        let mut h = Sym2::ZERO;
        for t in &self.terms {
            let (tv, tg, th) = t.eval(z);
            v += tv;
            g += tg;
            h += th;
        }
        (v, g, h)
    }
}

impl ScalarField for Potential {
    fn value(&self, z: Vec2) -> f64 {
        self.terms.iter().map(|t| t.eval(z).0).sum()
    }
    fn gradient(&self, z: Vec2) -> Vec2 {
        let mut g = Vec2::ZERO;
        for t in &self.terms {
            g += t.eval(z).1;
        }
        g
    }
    fn hessian(&self, z: Vec2) -> Sym2 {
        let mut h = Sym2::ZERO;
        for t in &self.terms {
            h += t.eval(z).2;
        }
        h
    }
}

impl Add for Potential {
    type Output = Potential;
    fn add(mut self, o: Potential) -> Potential {
        self.terms.extend(o.terms);
        self
    }
}

impl Neg for Potential {
    type Output = Potential;
    fn neg(self) -> Potential {
        self.scaled(-1.0)
    }
}

/// Orientation of a gradient field relative to its stored potential.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// `f = sign · ∇φ`. Constant offsets are folded into `φ` as linear
/// monomials, so `f` is always the exact gradient of `sign · φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradientField {
    pub potential: Potential,
    pub sign: Sign,
}

impl GradientField {
    pub fn new(potential: Potential) -> Self {
        GradientField { potential, sign: Sign::Plus }
    }

    pub fn with_sign(potential: Potential, sign: Sign) -> Self {
        GradientField { potential, sign }
    }

    pub fn identity() -> Self {
        GradientField::new(Potential::identity())
    }

    pub fn minus_identity() -> Self {
        GradientField::with_sign(Potential::identity(), Sign::Minus)
    }

    pub fn negated(&self) -> Self {
        GradientField { potential: self.potential.clone(), sign: self.sign.flipped() }
    }

    /// `f + c`, recorded as the linear correction `sign·(c·z)` in `φ`.
    pub fn with_offset(&self, c: Vec2) -> Self {
        let s = self.sign.factor();
        let mut potential = self.potential.clone();
        potential.push(PotentialTerm::monomial(s * c.x, 1, 0));
        potential.push(PotentialTerm::monomial(s * c.y, 0, 1));
        GradientField { potential, sign: self.sign }
    }

    /// `sign · φ` as a plain potential.
    pub fn effective_potential(&self) -> Potential {
        self.potential.scaled(self.sign.factor())
    }

    pub fn eval(&self, z: Vec2) -> Vec2 {
        self.gradient(z)
    }
}

impl ScalarField for GradientField {
    fn value(&self, z: Vec2) -> f64 {
        self.sign.factor() * self.potential.value(z)
    }
    fn gradient(&self, z: Vec2) -> Vec2 {
        self.potential.gradient(z) * self.sign.factor()
    }
    fn hessian(&self, z: Vec2) -> Sym2 {
        self.potential.hessian(z).scale(self.sign.factor())
    }
}

/// Central-difference gradient of the value, step `h`.
pub fn fd_gradient<F: ScalarField + ?Sized>(f: &F, z: Vec2, h: f64) -> Vec2 {
    let ex = Vec2::new(h, 0.0);
    let ey = Vec2::new(0.0, h);
    Vec2::new(
        (f.value(z + ex) - f.value(z - ex)) / (2.0 * h),
        (f.value(z + ey) - f.value(z - ey)) / (2.0 * h),
    )
}

/// Central-difference Jacobian of the gradient, step `h` (not symmetrized).
pub fn fd_hessian<F: ScalarField + ?Sized>(f: &F, z: Vec2, h: f64) -> [[f64; 2]; 2] {
    let ex = Vec2::new(h, 0.0);
    let ey = Vec2::new(0.0, h);
    let gx = (f.gradient(z + ex) - f.gradient(z - ex)) / (2.0 * h);
    let gy = (f.gradient(z + ey) - f.gradient(z - ey)) / (2.0 * h);
    [[gx.x, gy.x], [gx.y, gy.y]]
}

/// Numerical verdict on properness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropernessVerdict {
    ProperLikely,
    NotProper,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropernessEvidence {
    pub radii: Vec<f64>,
    pub min_norms: Vec<f64>,
    pub verdict: PropernessVerdict,
}

/// Threshold below which circle minima count as vanishing.
const VANISHING_NORM: f64 = 1e-3;

/// Samples `min |f|` on `n_circles` evenly spaced circles out to `r_max`.
///
/// `ProperLikely` when the minima over the outer half of the radii are
/// positive and non-decreasing; `NotProper` when the last three minima sit
/// below `1e-3` and do not increase; otherwise `Inconclusive`.
pub fn properness_evidence<F: ScalarField + ?Sized>(
    f: &F,
    r_max: f64,
    n_circles: usize,
    n_samples: usize,
) -> PropernessEvidence {
    let n_circles = n_circles.max(3);
    let n_samples = n_samples.max(8);
    let radii: Vec<f64> = (1..=n_circles).map(|k| r_max * k as f64 / n_circles as f64).collect();
    let min_norms: Vec<f64> = radii
        .iter()
        .map(|&r| {
            (0..n_samples)
                .map(|k| {
                    let a = TAU * (k as f64 + 0.5) / n_samples as f64;
                    let n = f.gradient(Vec2::polar(r, a)).norm();
                    if n.is_finite() {
                        n
                    } else {
                        f64::INFINITY
                    }
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let verdict = classify_minima(&min_norms);
    PropernessEvidence { radii, min_norms, verdict }
}

fn classify_minima(m: &[f64]) -> PropernessVerdict {
    let n = m.len();
    let tail = &m[n - 3..];
    let decaying = tail.iter().all(|&v| v < VANISHING_NORM) && tail.windows(2).all(|w| w[1] <= w[0]);
    if decaying {
        return PropernessVerdict::NotProper;
    }
    let half = &m[n / 2..];
    let floor = half.iter().copied().fold(f64::INFINITY, f64::min);
    let monotone = half.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9));
    if floor > VANISHING_NORM && monotone {
        PropernessVerdict::ProperLikely
    } else {
        PropernessVerdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn half_sq() -> Potential {
        Potential::identity()
    }

    #[test]
    fn eval_potential_examples() {
        assert_eq!(half_sq().value(Vec2::new(1.0, 1.0)), 1.0);
        assert_eq!(Potential::default().value(Vec2::new(3.0, -2.0)), 0.0);
        let g = Potential::new(vec![PotentialTerm::gauss(1.0, Vec2::ZERO, 1.0)]);
        assert_eq!(g.value(Vec2::ZERO), 1.0);
    }

    #[test]
    fn eval_gradient_examples() {
        assert_eq!(half_sq().gradient(Vec2::new(2.0, -3.0)), Vec2::new(2.0, -3.0));
        assert_eq!(Potential::saddle().gradient(Vec2::new(1.0, 1.0)), Vec2::new(1.0, -1.0));
        assert_eq!(Potential::double_well().gradient(Vec2::new(1.0, 0.0)), Vec2::ZERO);
    }

    #[test]
    fn eval_hessian_examples() {
        assert_eq!(half_sq().hessian(Vec2::new(0.3, 7.0)), Sym2::IDENTITY);
        assert_eq!(Potential::double_well().hessian(Vec2::ZERO), Sym2::diag(-4.0, 2.0));
        assert_eq!(Potential::saddle().hessian(Vec2::new(-1.0, 2.0)), Sym2::diag(1.0, -1.0));
    }

    #[test]
    fn offset_is_folded_into_potential() {
        let f = GradientField::identity().with_offset(Vec2::new(1.0, -2.0));
        let z = Vec2::new(0.5, 0.25);
        assert_eq!(f.gradient(z), Vec2::new(1.5, -1.75));
        let g = GradientField::minus_identity().with_offset(Vec2::new(1.0, 0.0));
        assert_eq!(g.gradient(Vec2::ZERO), Vec2::new(1.0, 0.0));
        assert_eq!(g.gradient(Vec2::ZERO), fd_gradient(&g, Vec2::ZERO, 1e-5));
    }

    #[test]
    fn properness_examples() {
        let id = GradientField::identity();
        let ev = properness_evidence(&id, 100.0, 10, 64);
        assert_eq!(ev.verdict, PropernessVerdict::ProperLikely);
        for (r, m) in ev.radii.iter().zip(&ev.min_norms) {
            assert!((r - m).abs() < 1e-9 * r);
        }
        let bump = GradientField::new(Potential::new(vec![PotentialTerm::gauss(1.0, Vec2::ZERO, 1.0)]));
        assert_eq!(properness_evidence(&bump, 100.0, 10, 64).verdict, PropernessVerdict::NotProper);
        let dw = GradientField::new(Potential::double_well());
        assert_eq!(properness_evidence(&dw, 100.0, 10, 64).verdict, PropernessVerdict::ProperLikely);
    }

    #[test]
    fn compact_bump_vanishes_outside_support() {
        let b = PotentialTerm::CompactBump { amp: 2.0, center: Vec2::new(1.0, 1.0), radius: 0.5 };
        let (v, g, h) = b.eval(Vec2::new(3.0, 1.0));
        assert_eq!((v, g, h), (0.0, Vec2::ZERO, Sym2::ZERO));
        assert_eq!(b.eval(Vec2::new(1.0, 1.0)).0, 2.0);
    }

    #[test]
    fn tube_profile_returns_to_zero() {
        let t = TubeTemplate {
            origin: Vec2::ZERO,
            axis: Vec2::new(1.0, 0.0),
            half_len: 1.0,
            v_core: 1.0,
            v_outer: 2.0,
            ramp: 0.5,
            lobe_center: 3.0,
            lobe_half_width: 1.0,
        };
        let (_, hi) = t.xi_support();
        let (g_end, _, _) = t.profile(hi - 1e-12);
        assert!(g_end.abs() < 1e-9);
        // g' integrates to g.
        let n = 200_000;
        let (lo, hi) = t.xi_support();
        let h = (hi - lo) / n as f64;
        let mut acc = 0.0;
        for k in 0..n {
            let x = lo + (k as f64 + 0.5) * h;
            acc += t.profile(x).1 * h;
            if k % 20_000 == 0 {
                let xe = lo + (k as f64 + 1.0) * h;
                assert!((acc - t.profile(xe).0).abs() < 1e-6, "at {xe}");
            }
        }
        assert!(acc.abs() < 1e-6);
    }
}
