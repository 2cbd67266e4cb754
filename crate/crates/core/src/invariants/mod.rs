//! Brouwer degree three ways, disc exit sets and their Conley Betti vectors.

use alloc::vec::Vec;

use thiserror::Error;

use crate::field::{properness_evidence, PropernessVerdict, ScalarField};
use crate::flow::{AngularArc, CriticalKind, CriticalPoint};
use crate::math::{self, Vec2, PI, TAU};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum InvariantError {
    #[error("field vanishes on the circle near angle {angle}")]
    ZeroOnBoundary { angle: f64 },
    #[error("winding number needs more than 2^22 samples")]
    RefinementExhausted,
    #[error("degenerate zero at ({x}, {y})")]
    DegenerateZero { x: f64, y: f64 },
    #[error("tangency of the field to the circle near angle {angle}")]
    TangencyUnresolved { angle: f64 },
    #[error("exit set did not stabilize up to radius {radius}")]
    NoStabilization { radius: f64 },
    #[error("field does not look proper")]
    NotProper,
}

const MAX_SAMPLES: usize = 1 << 22;
const ZERO_NORM: f64 = 1e-12;

fn circle(radius: f64, angle: f64) -> Vec2 {
    Vec2::polar(radius, angle)
}

/// Winding number of `f` along the circle of `radius` about the origin.
///
/// Starts from `n0` equally spaced samples and bisects every interval across
/// which the direction of `f` turns by `π/2` or more, so each summed angle
/// increment is the true one.
pub fn winding_degree<F: ScalarField + ?Sized>(f: &F, radius: f64, n0: usize) -> Result<i64, InvariantError> {
    let n0 = n0.max(4);
    let sample = |a: f64| -> Result<f64, InvariantError> {
        let v = f.gradient(circle(radius, a));
        if !(v.norm() >= ZERO_NORM) {
            return Err(InvariantError::ZeroOnBoundary { angle: a });
        }
        Ok(v.angle())
    };
    let mut total = 0.0;
    let mut count = n0;
    let mut stack: Vec<(f64, f64, f64, f64)> = Vec::new();
    for k in 0..n0 {
        let a0 = TAU * k as f64 / n0 as f64;
        let a1 = TAU * (k + 1) as f64 / n0 as f64;
        stack.push((a0, sample(a0)?, a1, sample(a1)?));
        while let Some((a0, d0, a1, d1)) = stack.pop() {
            let inc = math::wrap_pi(d1 - d0);
            if inc.abs() < 0.5 * PI {
                total += inc;
                continue;
            }
            count += 1;
            if count > MAX_SAMPLES {
                return Err(InvariantError::RefinementExhausted);
            }
            let am = 0.5 * (a0 + a1);
            let dm = sample(am)?;
            stack.push((am, dm, a1, d1));
            stack.push((a0, d0, am, dm));
        }
    }
    let turns = total / TAU;
    Ok(math::round(turns) as i64)
}

fn require_nondegenerate(zeros: &[CriticalPoint]) -> Result<(), InvariantError> {
    match zeros.iter().find(|p| p.kind == CriticalKind::Degenerate) {
        Some(p) => Err(InvariantError::DegenerateZero { x: p.position.x, y: p.position.y }),
        None => Ok(()),
    }
}

/// `Σ sign det Hess` over the zeros.
pub fn hessian_sum_degree(zeros: &[CriticalPoint]) -> Result<i64, InvariantError> {
    require_nondegenerate(zeros)?;
    Ok(zeros.iter().map(|p| if p.hessian.det() > 0.0 { 1 } else { -1 }).sum())
}

/// `|A| − |B|`: sources and sinks minus saddles.
pub fn morse_count_degree(nodes: &[CriticalPoint]) -> Result<i64, InvariantError> {
    require_nondegenerate(nodes)?;
    Ok(nodes.iter().map(|p| p.kind.index().unwrap_or(0) as i64).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub winding: i64,
    pub hessian_sum: Option<i64>,
    pub morse_count: Option<i64>,
    pub consistent: bool,
}

/// All three degree computations. Counting methods are skipped when a zero
/// is degenerate.
pub fn degree_report<F: ScalarField + ?Sized>(
    f: &F,
    zeros: &[CriticalPoint],
    radius: f64,
) -> Result<DegreeReport, InvariantError> {
    let winding = winding_degree(f, radius, 256)?;
    let hessian_sum = hessian_sum_degree(zeros).ok();
    let morse_count = morse_count_degree(zeros).ok();
    let consistent = [hessian_sum, morse_count].iter().all(|v| *v == Some(winding));
    Ok(DegreeReport { winding, hessian_sum, morse_count, consistent })
}

/// Shape of the outward-pointing part of a circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExitStructure {
    Empty,
    Full,
    Arcs(usize),
}

impl ExitStructure {
    pub fn name(&self) -> &'static str {
        match self {
            ExitStructure::Empty => "empty",
            ExitStructure::Full => "full",
            ExitStructure::Arcs(_) => "arcs",
        }
    }

    pub fn arc_count(&self) -> usize {
        match self {
            ExitStructure::Arcs(m) => *m,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExitSet {
    pub radius: f64,
    pub structure: ExitStructure,
    /// Maximal arcs where `⟨f(z), z⟩ > 0`, empty unless `structure` is `Arcs`.
    pub arcs: Vec<AngularArc>,
}

/// `⟨f(z), z⟩ / (|f| |z|)` on the circle, `0` where `f` vanishes.
fn outwardness<F: ScalarField + ?Sized>(f: &F, radius: f64, a: f64) -> f64 {
    let z = circle(radius, a);
    let v = f.gradient(z);
    let n = v.norm();
    if n < ZERO_NORM {
        0.0
    } else {
        v.dot(z) / (n * radius)
    }
}

/// Exit set of the disc of `radius`: where the field points strictly outward.
pub fn exit_set<F: ScalarField + ?Sized>(f: &F, radius: f64, n: usize) -> Result<ExitSet, InvariantError> {
    let n = n.max(8);
    let angles: Vec<f64> = (0..n).map(|k| TAU * (k as f64 + 0.5) / n as f64).collect();
    let g: Vec<f64> = angles.iter().map(|&a| outwardness(f, radius, a)).collect();
    const TANGENT: f64 = 1e-12;
    for k in 0..n {
        if g[k].abs() < TANGENT {
            return Err(InvariantError::TangencyUnresolved { angle: angles[k] });
        }
    }
    if g.iter().all(|&v| v > 0.0) {
        return Ok(ExitSet { radius, structure: ExitStructure::Full, arcs: Vec::new() });
    }
    if g.iter().all(|&v| v < 0.0) {
        return Ok(ExitSet { radius, structure: ExitStructure::Empty, arcs: Vec::new() });
    }
    // Sign changes, each located by bisection and checked for transversality.
    let mut rises: Vec<f64> = Vec::new();
    let mut falls: Vec<f64> = Vec::new();
    for k in 0..n {
        let j = (k + 1) % n;
        if (g[k] > 0.0) == (g[j] > 0.0) {
            continue;
        }
        let a0 = angles[k];
        let span = math::wrap_tau(angles[j] - a0);
        let (mut lo, mut hi) = (0.0, span);
        while hi - lo > 1e-8 {
            let mid = 0.5 * (lo + hi);
            if (outwardness(f, radius, a0 + mid) > 0.0) == (g[k] > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = math::wrap_tau(a0 + 0.5 * (lo + hi));
        let d = 1e-6;
        let slope = (outwardness(f, radius, root + d) - outwardness(f, radius, root - d)) / (2.0 * d);
        if slope.abs() < 1e-9 {
            return Err(InvariantError::TangencyUnresolved { angle: root });
        }
        if g[k] < 0.0 {
            rises.push(root);
        } else {
            falls.push(root);
        }
    }
    // Each arc runs from a rise to the next fall counter-clockwise.
    let mut arcs: Vec<AngularArc> = rises
        .iter()
        .map(|&r| {
            let end = falls
                .iter()
                .copied()
                .min_by(|a, b| math::wrap_tau(a - r).total_cmp(&math::wrap_tau(b - r)))
                .unwrap_or(r);
            AngularArc::between(r, end)
        })
        .collect();
    arcs.sort_by(|a, b| a.start.total_cmp(&b.start));
    let m = arcs.len();
    Ok(ExitSet { radius, structure: ExitStructure::Arcs(m), arcs })
}

/// Pointed Betti numbers of the disc modulo its exit set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConleyBetti {
    pub b0: u32,
    pub b1: u32,
    pub b2: u32,
}

impl ConleyBetti {
    pub fn new(b0: u32, b1: u32, b2: u32) -> Self {
        ConleyBetti { b0, b1, b2 }
    }

    pub fn euler(&self) -> i64 {
        self.b0 as i64 - self.b1 as i64 + self.b2 as i64
    }

    pub fn as_array(&self) -> [u32; 3] {
        [self.b0, self.b1, self.b2]
    }
}

/// `Empty → (1,0,0)`, `Full → (0,0,1)`, `Arcs(m) → (0, m−1, 0)`.
pub fn conley_betti(e: &ExitStructure) -> ConleyBetti {
    match *e {
        ExitStructure::Empty => ConleyBetti::new(1, 0, 0),
        ExitStructure::Full => ConleyBetti::new(0, 0, 1),
        ExitStructure::Arcs(m) => ConleyBetti::new(0, m.saturating_sub(1) as u32, 0),
    }
}

/// Samples per circle when stabilizing exit sets.
pub const EXIT_SAMPLES: usize = 720;
/// Number of radius doublings tried by [`stabilize_radius`].
pub const DOUBLINGS: u32 = 8;

/// Smallest radius `r0·2^k`, `k ≤ 8`, whose exit structure matches that at `2r`.
/// Radii where the exit set cannot be resolved are skipped.
pub fn stabilize_radius<F: ScalarField + ?Sized>(f: &F, r0: f64) -> Result<(f64, ExitSet), InvariantError> {
    let mut prev: Option<Result<ExitSet, InvariantError>> = None;
    for k in 0..=DOUBLINGS {
        let r = r0 * (1u64 << k) as f64;
        let cur = match prev.take() {
            Some(c) => c,
            None => exit_set(f, r, EXIT_SAMPLES),
        };
        let next = exit_set(f, 2.0 * r, EXIT_SAMPLES);
        if let (Ok(a), Ok(b)) = (&cur, &next) {
            if a.structure == b.structure {
                return Ok((r, cur.unwrap()));
            }
        }
        prev = Some(next);
    }
    Err(InvariantError::NoStabilization { radius: r0 * (1u64 << DOUBLINGS) as f64 })
}

/// Stabilized Conley Betti vector of a large disc.
pub fn stabilized_betti<F: ScalarField + ?Sized>(f: &F, r0: f64) -> Result<(f64, ExitSet, ConleyBetti), InvariantError> {
    let (r, e) = stabilize_radius(f, r0)?;
    let b = conley_betti(&e.structure);
    Ok((r, e, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Obstruction {
    Obstructed,
    NotObstructed,
}

/// Two proper gradient fields whose large-disc Conley indices differ cannot
/// be joined by a proper gradient homotopy.
pub fn conley_obstruction<F: ScalarField + ?Sized, G: ScalarField + ?Sized>(
    fa: &F,
    fb: &G,
) -> Result<Obstruction, InvariantError> {
    for ev in [properness_evidence(fa, 100.0, 20, 64), properness_evidence(fb, 100.0, 20, 64)] {
        if ev.verdict != PropernessVerdict::ProperLikely {
            return Err(InvariantError::NotProper);
        }
    }
    let (_, _, ba) = stabilized_betti(fa, 1.0)?;
    let (_, _, bb) = stabilized_betti(fb, 1.0)?;
    Ok(if ba == bb { Obstruction::NotObstructed } else { Obstruction::Obstructed })
}
