//! Trajectory integration with limit classification.

use alloc::vec;
use alloc::vec::Vec;

use super::critical::{CriticalKind, CriticalPoint};
use super::ode::{dopri_step, step_factor};
use super::FlowError;
use crate::field::ScalarField;
use crate::math::{self, Sym2, Vec2, TAU};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn factor(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

/// Where a trajectory ends up. Backward limits are what the literature
/// writes `ω⁻`, forward limits `ω⁺`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LimitLabel {
    /// Index into the analyzer's critical-point list.
    AtCritical(usize),
    AtInfinity,
    Unresolved,
}

impl LimitLabel {
    pub fn critical(self) -> Option<usize> {
        match self {
            LimitLabel::AtCritical(i) => Some(i),
            _ => None,
        }
    }
}

/// Termination caps for one integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationCaps {
    pub t_max: f64,
    pub escape_radius: f64,
    pub capture_radius: f64,
    pub max_steps: usize,
    pub rtol: f64,
    pub atol: f64,
}

impl IntegrationCaps {
    pub fn with_escape(escape_radius: f64) -> Self {
        IntegrationCaps { escape_radius, ..Default::default() }
    }
}

impl Default for IntegrationCaps {
    fn default() -> Self {
        IntegrationCaps {
            t_max: 1000.0,
            escape_radius: 50.0,
            capture_radius: 1e-3,
            max_steps: 200_000,
            rtol: 1e-9,
            atol: 1e-12,
        }
    }
}

/// Integrated orbit. `samples` holds `(s, z)` with `s ≥ 0` the elapsed time
/// in the integration direction, strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub direction: Direction,
    pub samples: Vec<(f64, Vec2)>,
    pub forward_limit: LimitLabel,
    pub backward_limit: LimitLabel,
    /// Closest approach to each critical point of the analyzer.
    pub closest: Vec<f64>,
}

impl Trajectory {
    /// Limit in the direction that was integrated.
    pub fn limit(&self) -> LimitLabel {
        match self.direction {
            Direction::Forward => self.forward_limit,
            Direction::Backward => self.backward_limit,
        }
    }

    pub fn end(&self) -> Vec2 {
        self.samples.last().map(|s| s.1).unwrap_or_default()
    }

    /// Flow time of a sample (negative when integrated backward).
    pub fn flow_time(&self, k: usize) -> f64 {
        self.direction.factor() * self.samples[k].0
    }
}

/// Linearization frame at a source. Directions leaving the source are
/// parametrized by the angle of `H^{1/2}(z − p)` on the ellipse
/// `|H^{1/2}(z − p)| = rho`, a level set of the quadratic model of `φ`
/// that every outgoing orbit crosses once.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceFrame {
    pub center: Vec2,
    pub sqrt_h: Sym2,
    pub inv_sqrt_h: Sym2,
    /// Ellipse radius in `H^{1/2}` coordinates.
    pub rho: f64,
    /// Largest Euclidean distance of the ellipse from the source.
    pub euclid_radius: f64,
    /// Smallest Euclidean distance of the ellipse from the source.
    pub inner_radius: f64,
}

impl SourceFrame {
    pub fn launch_point(&self, angle: f64) -> Vec2 {
        self.center + self.inv_sqrt_h.mul_vec(Vec2::polar(self.rho, angle))
    }

    pub fn scaled_offset(&self, z: Vec2) -> Vec2 {
        self.sqrt_h.mul_vec(z - self.center)
    }

    pub fn angle_of(&self, z: Vec2) -> f64 {
        math::wrap_tau(self.scaled_offset(z).angle())
    }
}

/// Integrates orbits of `f` against a fixed list of critical points.
pub struct FlowAnalyzer<'a, F: ScalarField + ?Sized> {
    pub field: &'a F,
    pub points: Vec<CriticalPoint>,
    pub caps: IntegrationCaps,
    capture: Vec<f64>,
    saddle_capture: Vec<f64>,
    frames: Vec<Option<SourceFrame>>,
}

impl<'a, F: ScalarField + ?Sized> FlowAnalyzer<'a, F> {
    pub fn new(field: &'a F, points: Vec<CriticalPoint>, caps: IntegrationCaps) -> Self {
        let n = points.len();
        let mut capture = vec![caps.capture_radius; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let d = points[i].position.distance(points[j].position);
                    capture[i] = capture[i].min(0.25 * d);
                }
            }
        }
        let mut frames = vec![None; n];
        for i in 0..n {
            if points[i].kind == CriticalKind::Source {
                let nearest = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| points[i].position.distance(points[j].position))
                    .fold(f64::INFINITY, f64::min);
                if let Some(fr) = source_frame(field, &points[i], nearest) {
                    capture[i] = capture[i].min(0.5 * fr.inner_radius);
                    frames[i] = Some(fr);
                }
            }
        }
        let saddle_capture = capture.iter().map(|c| c * 1e-4).collect();
        FlowAnalyzer { field, points, caps, capture, saddle_capture, frames }
    }

    pub fn frame(&self, i: usize) -> Option<&SourceFrame> {
        self.frames.get(i).and_then(|f| f.as_ref())
    }

    pub fn capture_radius(&self, i: usize) -> f64 {
        self.capture[i]
    }

    pub fn indices_of(&self, kind: CriticalKind) -> impl Iterator<Item = usize> + '_ {
        self.points.iter().enumerate().filter(move |(_, p)| p.kind == kind).map(|(i, _)| i)
    }

    fn terminal(&self, z: Vec2, dir: Direction) -> Option<LimitLabel> {
        let s = dir.factor();
        if z.norm() > self.caps.escape_radius && s * self.field.gradient(z).dot(z) > 0.0 {
            return Some(LimitLabel::AtInfinity);
        }
        for (i, p) in self.points.iter().enumerate() {
            let d = z.distance(p.position);
            if d >= self.capture[i] {
                continue;
            }
            let slack = 1e-12 * (1.0 + p.value.abs());
            let captured = match (p.kind, dir) {
                (CriticalKind::Sink, Direction::Forward) => self.field.value(z) <= p.value + slack,
                (CriticalKind::Source, Direction::Backward) => self.field.value(z) >= p.value - slack,
                (CriticalKind::Saddle, _) => d < self.saddle_capture[i],
                (CriticalKind::Degenerate, _) => true,
                _ => false,
            };
            if captured {
                return Some(LimitLabel::AtCritical(i));
            }
        }
        None
    }

    /// Integrates `ż = ±f(z)` from `z0` until capture, escape, or the caps run out.
    pub fn integrate(&self, z0: Vec2, dir: Direction) -> Result<Trajectory, FlowError> {
        self.integrate_with(z0, dir, self.caps.t_max)
    }

    pub fn integrate_with(&self, z0: Vec2, dir: Direction, t_max: f64) -> Result<Trajectory, FlowError> {
        let sgn = dir.factor();
        let rhs = |z: Vec2| self.field.gradient(z) * sgn;
        let mut closest: Vec<f64> = self.points.iter().map(|p| p.position.distance(z0)).collect();
        let mut samples = vec![(0.0, z0)];
        let finish = |samples: Vec<(f64, Vec2)>, closest: Vec<f64>, label: LimitLabel| {
            let (forward_limit, backward_limit) = match dir {
                Direction::Forward => (label, LimitLabel::Unresolved),
                Direction::Backward => (LimitLabel::Unresolved, label),
            };
            Trajectory { direction: dir, samples, forward_limit, backward_limit, closest }
        };
        if let Some(label) = self.terminal(z0, dir) {
            return Ok(finish(samples, closest, label));
        }
        let mut z = z0;
        let mut k = rhs(z);
        let mut t = 0.0;
        let speed = k.norm();
        let mut h = if speed > 0.0 { (1e-2 * (1.0 + z.norm()) / speed).min(1e-1) } else { 1e-1 };
        let h_max = 0.25 * self.caps.escape_radius.max(1.0);
        let mut steps = 0usize;
        loop {
            if t >= t_max || steps >= self.caps.max_steps {
                return Ok(finish(samples, closest, LimitLabel::Unresolved));
            }
            steps += 1;
            let h_try = h.min(t_max - t).min(h_max);
            let st = dopri_step(&rhs, z, k, h_try, self.caps.rtol, self.caps.atol);
            let ok = st.z.is_finite() && st.err.is_finite();
            if ok && st.err <= 1.0 {
                t += h_try;
                z = st.z;
                k = st.dz;
                samples.push((t, z));
                for (c, p) in closest.iter_mut().zip(&self.points) {
                    *c = c.min(z.distance(p.position));
                }
                if let Some(label) = self.terminal(z, dir) {
                    return Ok(finish(samples, closest, label));
                }
            }
            h = if ok { h_try * step_factor(st.err) } else { h_try * 0.2 };
            if h < 1e-14 * (1.0 + t) {
                return Err(FlowError::StepUnderflow { t, x: z.x, y: z.y });
            }
        }
    }

    /// Advances `z` by exactly `tau` with a single embedded step.
    pub(crate) fn substep(&self, z: Vec2, dir: Direction, tau: f64) -> Vec2 {
        let sgn = dir.factor();
        let rhs = |w: Vec2| self.field.gradient(w) * sgn;
        dopri_step(&rhs, z, rhs(z), tau, self.caps.rtol, self.caps.atol).z
    }

    /// Angle at which a backward orbit captured by source `i` crosses that
    /// source's launch ellipse.
    pub fn approach_angle(&self, traj: &Trajectory, i: usize) -> Option<f64> {
        let fr = self.frame(i)?;
        let q = |z: Vec2| fr.scaled_offset(z).norm() - fr.rho;
        let j = traj.samples.iter().position(|&(_, z)| q(z) <= 0.0)?;
        if j == 0 {
            return Some(fr.angle_of(traj.samples[0].1));
        }
        let (s0, z0) = traj.samples[j - 1];
        let (s1, _) = traj.samples[j];
        let (mut lo, mut hi) = (0.0, s1 - s0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if q(self.substep(z0, traj.direction, mid)) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * (1.0 + s1) {
                break;
            }
        }
        Some(fr.angle_of(self.substep(z0, traj.direction, hi)))
    }

    /// Forward destination of the orbit leaving source `i` at launch angle `angle`.
    pub fn launch(&self, i: usize, angle: f64) -> Result<Trajectory, FlowError> {
        let fr = self.frame(i).ok_or(FlowError::NotASource(i))?;
        self.integrate(fr.launch_point(angle), Direction::Forward)
    }
}

/// Builds the launch ellipse for a source, sized so that the quadratic
/// model dominates: `rho_e · ‖H⁻¹‖ · L < 0.1` with `L` a sampled Lipschitz
/// constant of the Hessian.
pub fn source_frame<F: ScalarField + ?Sized>(f: &F, p: &CriticalPoint, nearest: f64) -> Option<SourceFrame> {
    let h = p.hessian;
    let ((l0, _), (l1, _)) = h.eigen();
    if l0 <= 0.0 {
        return None;
    }
    let sqrt_h = h.sqrt_pd()?;
    let inv_sqrt_h = sqrt_h.inverse()?;
    let limit = (0.25 * nearest).min(0.2);
    let mut r = limit;
    for _ in 0..3 {
        let lip = (0..16)
            .map(|k| {
                let z = p.position + Vec2::polar(r, TAU * k as f64 / 16.0);
                let d = f.hessian(z) - h;
                math::sqrt(d.frobenius_sq()) / r
            })
            .fold(0.0, f64::max);
        let bound = if lip > 0.0 { 0.1 * l0 / lip } else { f64::INFINITY };
        let next = limit.min(bound);
        if (next - r).abs() <= 1e-3 * r {
            r = next;
            break;
        }
        r = next;
    }
    let rho = r * math::sqrt(l0);
    Some(SourceFrame {
        center: p.position,
        sqrt_h,
        inv_sqrt_h,
        rho,
        euclid_radius: r,
        inner_radius: rho / math::sqrt(l1),
    })
}

/// Integrates a single orbit against `points` with default machinery.
pub fn integrate<F: ScalarField + ?Sized>(
    f: &F,
    z0: Vec2,
    direction: Direction,
    caps: IntegrationCaps,
    points: &[CriticalPoint],
) -> Result<Trajectory, FlowError> {
    FlowAnalyzer::new(f, points.to_vec(), caps).integrate(z0, direction)
}
