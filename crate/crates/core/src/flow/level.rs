//! Predictor–corrector tracing of level sets `φ = α`.

use alloc::vec::Vec;

use super::FlowError;
use crate::field::ScalarField;
use crate::math::Vec2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Closed,
    /// Unbounded component; points run from one escape end to the other.
    Open,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelCurve {
    pub kind: CurveKind,
    pub points: Vec<Vec2>,
    /// `max |φ − α|` over the points.
    pub residual: f64,
}

const MIN_GRAD: f64 = 1e-10;
const MAX_STEPS: usize = 1 << 20;

fn project<F: ScalarField + ?Sized>(f: &F, alpha: f64, mut z: Vec2) -> Result<Vec2, FlowError> {
    for _ in 0..50 {
        let g = f.gradient(z);
        let gg = g.norm_sq();
        if g.norm() < MIN_GRAD {
            return Err(FlowError::CriticalLevel { x: z.x, y: z.y });
        }
        let r = f.value(z) - alpha;
        let dz = g * (r / gg);
        z -= dz;
        if dz.norm() <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    Ok(z)
}

/// One walk along the level curve from `start` with tangent orientation `orient`.
/// Returns the points and whether the walk came back to `start`.
fn walk<F: ScalarField + ?Sized>(
    f: &F,
    alpha: f64,
    start: Vec2,
    orient: f64,
    h: f64,
    escape: f64,
) -> Result<(Vec<Vec2>, bool), FlowError> {
    let mut pts = alloc::vec![start];
    let mut z = start;
    let mut arc = 0.0;
    for _ in 0..MAX_STEPS {
        let g = f.gradient(z);
        if g.norm() < MIN_GRAD {
            return Err(FlowError::CriticalLevel { x: z.x, y: z.y });
        }
        let t = g.perp().normalized() * orient;
        let next = project(f, alpha, z + t * h)?;
        arc += next.distance(z);
        if arc >= 3.0 * h && next.distance(start) < h {
            return Ok((pts, true));
        }
        z = next;
        pts.push(z);
        if z.norm() > escape {
            return Ok((pts, false));
        }
    }
    Ok((pts, false))
}

/// Traces the component of `{φ = α}` through (the projection of) `seed`.
///
/// Closed components return their points in order with the start not
/// repeated; the closing segment joins the last point to the first.
/// Unbounded components are traced both ways until `|z| > 100(1 + |seed|)`.
pub fn trace_level_set<F: ScalarField + ?Sized>(f: &F, alpha: f64, seed: Vec2, h: f64) -> Result<LevelCurve, FlowError> {
    let start = project(f, alpha, seed)?;
    let escape = 100.0 * (1.0 + seed.norm());
    let (fwd, closed) = walk(f, alpha, start, 1.0, h, escape)?;
    let (kind, points) = if closed {
        (CurveKind::Closed, fwd)
    } else {
        let (mut back, _) = walk(f, alpha, start, -1.0, h, escape)?;
        back.reverse();
        back.pop();
        back.extend(fwd);
        (CurveKind::Open, back)
    };
    let residual = points.iter().map(|&z| (f.value(z) - alpha).abs()).fold(0.0, f64::max);
    Ok(LevelCurve { kind, points, residual })
}
