//! Numerical checks of structural facts about planar gradient flows:
//! monotonicity of `φ` along orbits, openness of sink and infinity
//! direction sets, uniqueness of a zero whose directions all escape,
//! reachability of a saddle from every source, and the height inequality
//! between the lowest reachable sink and the lowest reachable saddle.

use alloc::vec::Vec;

use super::analyzer::{Direction, FlowAnalyzer, IntegrationCaps, LimitLabel, Trajectory};
use super::critical::CriticalKind;
use super::graph::FlowPortrait;
use super::FlowError;
use crate::field::ScalarField;

/// Largest decrease of `φ` allowed between consecutive samples.
pub const LYAPUNOV_TOL: f64 = 1e-10;
/// Angular offset used to probe openness of an arc.
pub const OPENNESS_PROBE: f64 = 1e-6;

/// Largest step-to-step decrease of `φ` along the flow direction (0 if monotone).
pub fn lyapunov_defect<F: ScalarField + ?Sized>(f: &F, traj: &Trajectory) -> f64 {
    let s = traj.direction.factor();
    traj.samples
        .windows(2)
        .map(|w| s * (f.value(w[0].1) - f.value(w[1].1)))
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LemmaReport {
    pub lyapunov_violations: usize,
    pub openness_violations: usize,
    pub openness_checked: usize,
    pub uniqueness_violations: usize,
    pub key_violations: usize,
    pub key_checked: usize,
    pub height_violations: usize,
    pub height_checked: usize,
    pub degree_graph_ok: Option<bool>,
}

impl LemmaReport {
    pub fn total_violations(&self) -> usize {
        self.lyapunov_violations
            + self.openness_violations
            + self.uniqueness_violations
            + self.key_violations
            + self.height_violations
            + usize::from(self.degree_graph_ok == Some(false))
    }
}

/// Runs every check on a computed portrait. `winding` is the degree to
/// compare against `|A| − |B|`, if known.
pub fn check_lemmas<F: ScalarField + ?Sized>(
    f: &F,
    portrait: &FlowPortrait,
    winding: Option<i64>,
) -> Result<LemmaReport, FlowError> {
    let an = FlowAnalyzer::new(f, portrait.points.clone(), IntegrationCaps::with_escape(portrait.escape_radius));
    let mut rep = LemmaReport::default();
    for m in &portrait.manifolds {
        for br in m.stable.iter().chain(m.unstable.iter()) {
            if lyapunov_defect(f, br) > LYAPUNOV_TOL {
                rep.lyapunov_violations += 1;
            }
        }
    }
    let has_saddles = an.indices_of(CriticalKind::Saddle).next().is_some();
    for p in &portrait.partitions {
        for (arc, label) in &p.labels {
            let open_kind = match label {
                LimitLabel::AtInfinity => true,
                LimitLabel::AtCritical(i) => an.points[*i].kind == CriticalKind::Sink,
                LimitLabel::Unresolved => false,
            };
            if !open_kind {
                continue;
            }
            rep.openness_checked += 1;
            let m = arc.midpoint();
            let probe_ok = arc.length > 2.0 * OPENNESS_PROBE
                && [m - OPENNESS_PROBE, m, m + OPENNESS_PROBE]
                    .iter()
                    .map(|&a| an.launch(p.source, a).map(|t| t.forward_limit))
                    .collect::<Result<Vec<_>, _>>()?
                    .iter()
                    .all(|l| l == label);
            if !probe_ok {
                rep.openness_violations += 1;
            }
        }
        if p.is_full_escape() && portrait.points.len() != 1 {
            rep.uniqueness_violations += 1;
        }
        let saddle_dest = |l: &LimitLabel| matches!(l, LimitLabel::AtCritical(i) if an.points[*i].kind == CriticalKind::Saddle);
        if has_saddles {
            rep.key_checked += 1;
            if !p.separatrices.iter().any(|s| saddle_dest(&s.destination)) {
                rep.key_violations += 1;
            }
        }
        let mut min_sink = f64::INFINITY;
        let mut min_saddle = f64::INFINITY;
        for d in p.destinations() {
            if let LimitLabel::AtCritical(i) = d {
                let q = &an.points[i];
                match q.kind {
                    CriticalKind::Sink => min_sink = min_sink.min(q.value),
                    CriticalKind::Saddle => min_saddle = min_saddle.min(q.value),
                    _ => {}
                }
            }
        }
        if min_sink.is_finite() && min_saddle.is_finite() {
            rep.height_checked += 1;
            if min_sink < min_saddle - 1e-12 * (1.0 + min_saddle.abs()) {
                rep.height_violations += 1;
            }
        }
    }
    if let Some(w) = winding {
        rep.degree_graph_ok = Some(portrait.graph.count_a() as i64 - portrait.graph.count_b() as i64 == w);
    }
    Ok(rep)
}

/// Integrates a single orbit and reports its Lyapunov defect.
pub fn orbit_defect<F: ScalarField + ?Sized>(
    an: &FlowAnalyzer<'_, F>,
    z0: crate::math::Vec2,
    dir: Direction,
) -> Result<f64, FlowError> {
    Ok(lyapunov_defect(an.field, &an.integrate(z0, dir)?))
}
