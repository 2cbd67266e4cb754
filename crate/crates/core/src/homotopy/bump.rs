//! Lowering the value of one critical point by a compactly supported bump
//! `b = δ·(1 − |z − p|²/R²)³`, keeping the critical set fixed.

use alloc::vec::Vec;

use super::{FamilyKind, HomotopyError, PotentialPath};
use crate::field::{Potential, PotentialTerm, ScalarField, Sign};
use crate::flow::CriticalPoint;
use crate::math::{self, Vec2, TAU};

/// Multiples of the smallest admissible support radius tried in turn.
pub const BUMP_SCAN: [f64; 8] = [1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0];

const RINGS: usize = 48;
const SPOKES: usize = 96;

/// `|∇b| < ½|∇φ|` on a polar sample of the punctured support disc.
fn dominated(p: &Potential, bump: &PotentialTerm, center: Vec2, radius: f64) -> bool {
    (1..=RINGS).all(|i| {
        let r = radius * i as f64 / RINGS as f64;
        (0..SPOKES).all(|k| {
            let z = center + Vec2::polar(r, TAU * (k as f64 + 0.5) / SPOKES as f64);
            bump.eval(z).1.norm() < 0.5 * p.gradient(z).norm()
        })
    })
}

/// Returns `ψ = φ − b` with `ψ(saddle) = φ(saddle) − δ`, and the path `φ − t·b`.
pub fn bump_lower(
    p: &Potential,
    saddle: Vec2,
    delta: f64,
    points: &[CriticalPoint],
) -> Result<(Potential, PotentialPath), HomotopyError> {
    let h = p.hessian(saddle);
    let sigma_min = h.to_mat().min_singular();
    if !(sigma_min > 1e-12) {
        return Err(HomotopyError::SingularHessian);
    }
    let here = p.value(saddle);
    let others: Vec<&CriticalPoint> = points.iter().filter(|c| c.position.distance(saddle) > 1e-6).collect();
    let gap = others
        .iter()
        .map(|c| (c.value - here).abs())
        .filter(|g| *g > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !(delta >= 0.0) || (gap.is_finite() && delta >= 0.5 * gap) {
        return Err(HomotopyError::DeltaTooLarge);
    }
    let path = |delta_pot: Potential, meta: Vec<(&'static str, f64)>| PotentialPath {
        base: p.clone(),
        delta: delta_pot,
        sign: Sign::Plus,
        kind: FamilyKind::BumpPath,
        meta,
    };
    if delta == 0.0 {
        return Ok((p.clone(), path(Potential::default(), alloc::vec![("delta", 0.0), ("radius", 0.0)])));
    }
    let cap = 0.5 * others.iter().map(|c| c.position.distance(saddle)).fold(f64::INFINITY, f64::min);
    let r0 = math::sqrt(12.0 * delta / sigma_min);
    for k in BUMP_SCAN {
        let radius = k * r0;
        if radius > cap {
            break;
        }
        let bump = PotentialTerm::CompactBump { amp: delta, center: saddle, radius };
        if dominated(p, &bump, saddle, radius) {
            let lowering = Potential::new(alloc::vec![bump.scaled(-1.0)]);
            let psi = p.clone() + lowering.clone();
            return Ok((psi, path(lowering, alloc::vec![("delta", delta), ("radius", radius)])));
        }
    }
    Err(HomotopyError::SupportTooLarge)
}
