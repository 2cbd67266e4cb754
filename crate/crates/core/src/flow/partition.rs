//! Direction partitions at sources and saddle invariant manifolds.

use alloc::vec::Vec;

use super::analyzer::{Direction, FlowAnalyzer, LimitLabel, Trajectory};
use super::critical::CriticalKind;
use super::FlowError;
use crate::field::ScalarField;
use crate::math::{self, TAU};

/// Offset from a saddle along its eigenvectors when shooting branches.
pub const BRANCH_OFFSET: f64 = 1e-6;
/// Angular resolution of separatrix bisection.
pub const ANGLE_TOL: f64 = 1e-8;
/// Maximum fraction of unresolved launch directions.
pub const UNRESOLVED_BUDGET: f64 = 0.01;

/// Counter-clockwise arc `[start, start + length)` of launch angles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngularArc {
    pub start: f64,
    pub length: f64,
}

impl AngularArc {
    pub fn full() -> Self {
        AngularArc { start: 0.0, length: TAU }
    }

    pub fn between(a: f64, b: f64) -> Self {
        let mut length = math::wrap_tau(b - a);
        if length == 0.0 {
            length = TAU;
        }
        AngularArc { start: math::wrap_tau(a), length }
    }

    pub fn end(&self) -> f64 {
        math::wrap_tau(self.start + self.length)
    }

    pub fn is_full(&self) -> bool {
        self.length >= TAU
    }

    pub fn midpoint(&self) -> f64 {
        math::wrap_tau(self.start + 0.5 * self.length)
    }

    pub fn contains(&self, angle: f64) -> bool {
        self.is_full() || math::wrap_tau(angle - self.start) < self.length
    }
}

/// An isolated launch angle whose orbit ends in a saddle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Separatrix {
    pub angle: f64,
    pub destination: LimitLabel,
}

/// Destinations of the orbits leaving one source, as a function of the
/// launch angle. Arcs run between consecutive separatrix angles.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionPartition {
    pub source: usize,
    pub labels: Vec<(AngularArc, LimitLabel)>,
    pub separatrices: Vec<Separatrix>,
    pub separatrix_angles: Vec<f64>,
    /// Raw launch samples `(angle, destination)`.
    pub samples: Vec<(f64, LimitLabel)>,
    pub unresolved: usize,
}

impl DirectionPartition {
    /// Number of arcs plus separatrices ending at `dest`.
    pub fn multiplicity(&self, dest: LimitLabel) -> usize {
        self.labels.iter().filter(|(_, l)| *l == dest).count()
            + self.separatrices.iter().filter(|s| s.destination == dest).count()
    }

    /// Distinct destinations, sorted.
    pub fn destinations(&self) -> Vec<LimitLabel> {
        let mut d: Vec<LimitLabel> =
            self.labels.iter().map(|a| a.1).chain(self.separatrices.iter().map(|s| s.destination)).collect();
        d.sort();
        d.dedup();
        d
    }

    pub fn label_at(&self, angle: f64) -> Option<LimitLabel> {
        if let Some(s) = self.separatrices.iter().find(|s| math::wrap_pi(s.angle - angle).abs() < ANGLE_TOL) {
            return Some(s.destination);
        }
        self.labels.iter().find(|(a, _)| a.contains(angle)).map(|a| a.1)
    }

    /// True when the whole circle flows to infinity.
    pub fn is_full_escape(&self) -> bool {
        self.separatrices.is_empty() && self.labels.len() == 1 && self.labels[0].1 == LimitLabel::AtInfinity
    }
}

/// Stable branches (integrated backward) and unstable branches (forward)
/// of a saddle, each launched at `±BRANCH_OFFSET` along an eigenvector.
#[derive(Clone, Debug, PartialEq)]
pub struct SaddleManifolds {
    pub saddle: usize,
    pub stable: [Trajectory; 2],
    pub unstable: [Trajectory; 2],
}

impl<F: ScalarField + ?Sized> FlowAnalyzer<'_, F> {
    pub fn saddle_manifolds(&self, j: usize) -> Result<SaddleManifolds, FlowError> {
        let p = self.points.get(j).filter(|p| p.kind == CriticalKind::Saddle).ok_or(FlowError::NotASaddle(j))?;
        let ((_, e_s), (_, e_u)) = p.hessian.eigen();
        let z = p.position;
        let stable = [
            self.integrate(z + e_s * BRANCH_OFFSET, Direction::Backward)?,
            self.integrate(z - e_s * BRANCH_OFFSET, Direction::Backward)?,
        ];
        let unstable = [
            self.integrate(z + e_u * BRANCH_OFFSET, Direction::Forward)?,
            self.integrate(z - e_u * BRANCH_OFFSET, Direction::Forward)?,
        ];
        Ok(SaddleManifolds { saddle: j, stable, unstable })
    }

    pub fn all_saddle_manifolds(&self) -> Result<Vec<SaddleManifolds>, FlowError> {
        self.indices_of(CriticalKind::Saddle).map(|j| self.saddle_manifolds(j)).collect()
    }

    /// Partition of launch directions at source `x` with `n0` samples.
    pub fn direction_partition(&self, x: usize, n0: usize) -> Result<DirectionPartition, FlowError> {
        let manifolds = self.all_saddle_manifolds()?;
        self.direction_partition_with(x, n0, &manifolds)
    }

    /// As [`Self::direction_partition`], reusing precomputed saddle branches.
    pub fn direction_partition_with(
        &self,
        x: usize,
        n0: usize,
        manifolds: &[SaddleManifolds],
    ) -> Result<DirectionPartition, FlowError> {
        if self.frame(x).is_none() {
            return Err(FlowError::NotASource(x));
        }
        let n0 = n0.max(8);
        let mut seps: Vec<Separatrix> = Vec::new();
        for m in manifolds {
            for br in &m.stable {
                if br.backward_limit == LimitLabel::AtCritical(x) {
                    if let Some(angle) = self.approach_angle(br, x) {
                        seps.push(Separatrix { angle, destination: LimitLabel::AtCritical(m.saddle) });
                    }
                }
            }
        }
        let near_known = |seps: &[Separatrix], a: f64| seps.iter().any(|s| math::wrap_pi(s.angle - a).abs() < 1e-6);

        let mut samples: Vec<(f64, LimitLabel)> = Vec::with_capacity(n0);
        for k in 0..n0 {
            let angle = TAU * (k as f64 + 0.5) / n0 as f64;
            let tr = self.launch(x, angle)?;
            let label = tr.forward_limit;
            if self.is_saddle_label(label) && !near_known(&seps, angle) {
                seps.push(Separatrix { angle, destination: label });
            }
            samples.push((angle, label));
        }
        let unresolved = samples.iter().filter(|s| s.1 == LimitLabel::Unresolved).count();
        if unresolved as f64 > UNRESOLVED_BUDGET * n0 as f64 {
            return Err(FlowError::UnresolvedArc { unresolved, total: n0 });
        }

        // Label changes that no known separatrix explains.
        let open: Vec<(f64, LimitLabel)> = samples.iter().copied().filter(|s| !self.is_saddle_label(s.1)).collect();
        for k in 0..open.len() {
            let (a0, l0) = open[k];
            let (a1, l1) = open[(k + 1) % open.len()];
            if l0 == l1 || open.len() < 2 {
                continue;
            }
            let span = AngularArc::between(a0, a1);
            if seps.iter().any(|s| span.contains(s.angle)) {
                continue;
            }
            let sep = self.bisect_separatrix(x, a0, l0, span.length)?;
            if !near_known(&seps, sep.angle) {
                seps.push(sep);
            }
        }

        seps.sort_by(|a, b| a.angle.total_cmp(&b.angle));
        seps.dedup_by(|b, a| math::wrap_pi(a.angle - b.angle).abs() < 1e-7);
        if seps.len() > 1 && math::wrap_pi(seps[0].angle - seps[seps.len() - 1].angle).abs() < 1e-7 {
            seps.pop();
        }

        let mut labels = Vec::new();
        if seps.is_empty() {
            let label = open.first().map(|s| s.1).unwrap_or(LimitLabel::Unresolved);
            labels.push((AngularArc::full(), label));
        } else {
            for k in 0..seps.len() {
                let arc = AngularArc::between(seps[k].angle, seps[(k + 1) % seps.len()].angle);
                let inside = open.iter().find(|s| arc.contains(s.0) && s.0 != arc.start);
                let label = match inside {
                    Some(s) => s.1,
                    None => self.launch(x, arc.midpoint())?.forward_limit,
                };
                labels.push((arc, label));
            }
        }
        let separatrix_angles = seps.iter().map(|s| s.angle).collect();
        Ok(DirectionPartition { source: x, labels, separatrices: seps, separatrix_angles, samples, unresolved })
    }

    fn is_saddle_label(&self, l: LimitLabel) -> bool {
        matches!(l, LimitLabel::AtCritical(i) if self.points[i].kind == CriticalKind::Saddle)
    }

    /// Bisects the launch angle between `a0` (label `l0`) and `a0 + span`.
    fn bisect_separatrix(&self, x: usize, a0: f64, l0: LimitLabel, span: f64) -> Result<Separatrix, FlowError> {
        let (mut lo, mut hi) = (0.0, span);
        let mut last: Option<Trajectory> = None;
        while hi - lo > ANGLE_TOL {
            let mid = 0.5 * (lo + hi);
            let tr = self.launch(x, a0 + mid)?;
            let l = tr.forward_limit;
            if self.is_saddle_label(l) {
                return Ok(Separatrix { angle: math::wrap_tau(a0 + mid), destination: l });
            }
            if l == l0 {
                lo = mid;
            } else {
                hi = mid;
            }
            last = Some(tr);
        }
        // The boundary orbit lingers at the saddle it separates.
        let destination = last
            .and_then(|tr| {
                self.indices_of(CriticalKind::Saddle)
                    .min_by(|&i, &j| tr.closest[i].total_cmp(&tr.closest[j]))
                    .filter(|&i| tr.closest[i] < 1e-2)
            })
            .map(LimitLabel::AtCritical)
            .unwrap_or(LimitLabel::Unresolved);
        Ok(Separatrix { angle: math::wrap_tau(a0 + 0.5 * (lo + hi)), destination })
    }
}
