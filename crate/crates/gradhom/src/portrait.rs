//! Sampled orbits, level sets and their CSV, JSON and SVG renderings.

use std::fmt::Write as _;

use gradhom_core::flow::{trace_level_set, CriticalKind, Direction, FlowAnalyzer, IntegrationCaps, Trajectory};
use gradhom_core::math::{Vec2, TAU};
use gradhom_core::ScalarField;
use serde_json::{json, Value};

use crate::analysis::{dest, partitions_json, Analysis};
use crate::error::CliError;

/// Orbits drawn from each extremum.
pub const RAYS: usize = 16;
/// Level sets drawn per portrait.
pub const LEVELS: usize = 4;
/// Viewport edge in pixels.
pub const VIEWPORT: f64 = 800.0;

pub struct Curve {
    pub name: String,
    pub kind: &'static str,
    pub traj: Trajectory,
}

pub struct Portrait {
    pub curves: Vec<Curve>,
    pub levels: Vec<(f64, Vec<Vec2>, bool)>,
}

pub fn collect(a: &Analysis, half: f64) -> Result<Portrait, CliError> {
    let mut curves = Vec::new();
    let escape = a.portrait.as_ref().map_or(10.0 * a.exit.radius, |p| p.escape_radius);
    let an = FlowAnalyzer::new(&a.field, a.points.clone(), IntegrationCaps::with_escape(escape));
    if let Some(p) = &a.portrait {
        for m in &p.manifolds {
            for (k, br) in m.stable.iter().enumerate() {
                curves.push(Curve { name: format!("saddle{}_stable{k}", m.saddle), kind: "separatrix", traj: br.clone() });
            }
            for (k, br) in m.unstable.iter().enumerate() {
                curves.push(Curve { name: format!("saddle{}_unstable{k}", m.saddle), kind: "separatrix", traj: br.clone() });
            }
        }
    }
    for (i, pt) in a.points.iter().enumerate() {
        for k in 0..RAYS {
            let angle = TAU * k as f64 / RAYS as f64;
            let traj = match pt.kind {
                CriticalKind::Source => an.launch(i, angle)?,
                CriticalKind::Sink => an.integrate(pt.position + Vec2::polar(1e-3, angle), Direction::Backward)?,
                _ => continue,
            };
            curves.push(Curve { name: format!("{}{i}_ray{k}", pt.kind.name()), kind: "orbit", traj });
        }
    }
    if a.points.is_empty() {
        // No zeros: orbits through a ring of points inside the box.
        for k in 0..RAYS {
            let z = Vec2::polar(0.5 * half, TAU * k as f64 / RAYS as f64);
            for (dir, tag) in [(Direction::Forward, "fwd"), (Direction::Backward, "bwd")] {
                let traj = an.integrate(z, dir)?;
                curves.push(Curve { name: format!("ring{k}_{tag}"), kind: "orbit", traj });
            }
        }
    }
    Ok(Portrait { curves, levels: levels(a, half) })
}

/// Level sets through points along a fixed ray; critical levels are skipped.
fn levels(a: &Analysis, half: f64) -> Vec<(f64, Vec<Vec2>, bool)> {
    let dir = Vec2::new(1.0, 0.3) / Vec2::new(1.0, 0.3).norm();
    let mut out = Vec::new();
    for k in 1..=LEVELS {
        let seed = dir * (half * k as f64 / (LEVELS + 1) as f64);
        let alpha = a.field.value(seed);
        if let Ok(c) = trace_level_set(&a.field, alpha, seed, half / 100.0) {
            let closed = c.kind == gradhom_core::flow::CurveKind::Closed;
            out.push((alpha, c.points, closed));
        }
    }
    out
}

pub fn csv(p: &Portrait) -> String {
    let mut s = String::from("curve,t,x,y\n");
    for c in &p.curves {
        for k in 0..c.traj.samples.len() {
            let z = c.traj.samples[k].1;
            writeln!(s, "{},{},{},{}", c.name, c.traj.flow_time(k), z.x, z.y).unwrap();
        }
    }
    s
}

pub fn json(a: &Analysis, p: &Portrait) -> Value {
    json!({
        "curves": p.curves.iter().map(|c| json!({
            "name": c.name,
            "kind": c.kind,
            "direction": match c.traj.direction { Direction::Forward => "forward", Direction::Backward => "backward" },
            "forward_limit": dest(c.traj.forward_limit),
            "backward_limit": dest(c.traj.backward_limit),
            "points": (0..c.traj.samples.len()).map(|k| {
                let z = c.traj.samples[k].1;
                [c.traj.flow_time(k), z.x, z.y]
            }).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "partitions": a.portrait.as_ref().map(partitions_json),
    })
}

fn color(kind: CriticalKind) -> &'static str {
    match kind {
        CriticalKind::Source => "#2a9d3a",
        CriticalKind::Sink => "#1f5fbf",
        CriticalKind::Saddle => "#e07b0e",
        CriticalKind::Degenerate => "#777777",
    }
}

/// Fixed map from the square `[-half, half]²` onto the viewport, y up.
struct View {
    half: f64,
}

impl View {
    fn px(&self, z: Vec2) -> (f64, f64) {
        let s = VIEWPORT / (2.0 * self.half);
        (round2((z.x + self.half) * s), round2((self.half - z.y) * s))
    }
}

fn round2(v: f64) -> f64 {
    let r = (v * 100.0).round() / 100.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn polyline(s: &mut String, view: &View, pts: impl Iterator<Item = Vec2>, class: &str, closed: bool) {
    let limit = 3.0 * view.half;
    let mut coords = String::new();
    for z in pts {
        if z.x.abs() > limit || z.y.abs() > limit {
            break;
        }
        let (x, y) = view.px(z);
        write!(coords, "{x:.2},{y:.2} ").unwrap();
    }
    if coords.is_empty() {
        return;
    }
    let tag = if closed { "polygon" } else { "polyline" };
    writeln!(s, r#"<{tag} class="{class}" points="{}"/>"#, coords.trim_end()).unwrap();
}

pub fn svg(a: &Analysis, p: &Portrait, half: f64) -> String {
    let view = View { half };
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{v}" height="{v}" viewBox="0 0 {v} {v}">"#,
        v = VIEWPORT
    )
    .unwrap();
    s.push_str(concat!(
        "<style>",
        ".level{fill:none;stroke:#bbbbbb;stroke-width:1}",
        ".orbit{fill:none;stroke:#8fa8c8;stroke-width:1}",
        ".separatrix{fill:none;stroke:#c0392b;stroke-width:2}",
        "</style>\n",
    ));
    writeln!(s, r#"<clipPath id="view"><rect x="0" y="0" width="{VIEWPORT}" height="{VIEWPORT}"/></clipPath>"#).unwrap();
    writeln!(s, r##"<rect x="0" y="0" width="{VIEWPORT}" height="{VIEWPORT}" fill="#ffffff"/>"##).unwrap();
    s.push_str("<g clip-path=\"url(#view)\">\n");
    for (_, pts, closed) in &p.levels {
        polyline(&mut s, &view, pts.iter().copied(), "level", *closed);
    }
    for c in p.curves.iter().filter(|c| c.kind == "orbit") {
        polyline(&mut s, &view, c.traj.samples.iter().map(|x| x.1), "orbit", false);
    }
    for c in p.curves.iter().filter(|c| c.kind == "separatrix") {
        polyline(&mut s, &view, c.traj.samples.iter().map(|x| x.1), "separatrix", false);
    }
    for (i, pt) in a.points.iter().enumerate() {
        let (x, y) = view.px(pt.position);
        writeln!(
            s,
            r#"<circle class="cp {k}" data-id="{i}" cx="{x:.2}" cy="{y:.2}" r="6" fill="{c}"/>"#,
            k = pt.kind.name(),
            c = color(pt.kind)
        )
        .unwrap();
    }
    s.push_str("</g>\n</svg>\n");
    s
}
