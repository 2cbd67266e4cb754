//! Seeded random proper fields and the property sweep over them.

use std::collections::BTreeMap;
use std::time::Instant;

use gradhom_core::flow::CriticalKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::analysis::{analyze, lemmas_json, Analysis, Settings};
use crate::error::CliError;
use crate::spec::{FieldSpec, TermSpec};

/// Sample ranges of the generator.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusSpec {
    pub count: usize,
    /// Coefficient range of the injected `c·|z|^{2p}` term.
    pub radial_c: (f64, f64),
    /// Choices of `p` for the injected term.
    pub radial_p: Vec<u32>,
    pub bumps: (usize, usize),
    pub bump_amplitude: f64,
    pub bump_center: f64,
    pub bump_sigma: (f64, f64),
    pub monomials: (usize, usize),
    pub monomial_coeff: f64,
    /// Draws per field before a non-generic candidate is kept anyway.
    pub attempts: usize,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            count: 50,
            radial_c: (0.2, 1.0),
            radial_p: vec![1, 2],
            bumps: (1, 4),
            bump_amplitude: 3.0,
            bump_center: 1.5,
            bump_sigma: (0.35, 0.8),
            monomials: (0, 2),
            monomial_coeff: 0.5,
            attempts: 8,
        }
    }
}

/// Corpus runs search a larger square than single-field commands.
pub fn default_settings() -> Settings {
    Settings { half: 6.0, grid: 48, ..Settings::default() }
}

impl CorpusSpec {
    /// One candidate. Monomials have total degree below `2p`, so the
    /// radial term dominates at infinity.
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> FieldSpec {
        let p = self.radial_p[rng.gen_range(0..self.radial_p.len())];
        let mut terms = vec![TermSpec::Radial { c: rng.gen_range(self.radial_c.0..=self.radial_c.1), p }];
        for _ in 0..rng.gen_range(self.bumps.0..=self.bumps.1) {
            let c = self.bump_center;
            terms.push(TermSpec::Gauss {
                a: rng.gen_range(-self.bump_amplitude..=self.bump_amplitude),
                cx: rng.gen_range(-c..=c),
                cy: rng.gen_range(-c..=c),
                sigma: rng.gen_range(self.bump_sigma.0..=self.bump_sigma.1),
            });
        }
        for _ in 0..rng.gen_range(self.monomials.0..=self.monomials.1) {
            let deg = rng.gen_range(1..2 * p);
            let i = rng.gen_range(0..=deg);
            terms.push(TermSpec::Monomial {
                c: rng.gen_range(-self.monomial_coeff..=self.monomial_coeff),
                i,
                j: deg - i,
            });
        }
        FieldSpec { terms, sign: if rng.gen_bool(0.5) { 1 } else { -1 } }
    }
}

pub struct FieldResult {
    pub id: usize,
    pub attempts: usize,
    pub spec: FieldSpec,
    pub outcome: Result<Analysis, CliError>,
    pub seconds: f64,
}

fn generic(a: &Analysis) -> bool {
    a.violations.is_empty()
}

fn run_one(id: usize, seed: u64, spec: &CorpusSpec, s: &Settings) -> FieldResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64);
    let mut attempts = 0;
    loop {
        attempts += 1;
        let field = spec.draw(&mut rng);
        let outcome = analyze(&field.field(), s);
        let keep = matches!(&outcome, Ok(a) if generic(a)) || attempts >= spec.attempts.max(1);
        if keep {
            return FieldResult { id, attempts, spec: field, outcome, seconds: start.elapsed().as_secs_f64() };
        }
    }
}

/// Generated corpus of `spec.count` fields.
pub fn run_corpus(spec: &CorpusSpec, s: &Settings) -> Vec<FieldResult> {
    let mut out: Vec<_> = (0..spec.count).into_par_iter().map(|i| run_one(i, s.seed, spec, s)).collect();
    out.sort_by_key(|r| r.id);
    out
}

/// Caller-supplied fields, processed like generated ones.
pub fn run_fields(fields: Vec<FieldSpec>, s: &Settings) -> Vec<FieldResult> {
    let mut out: Vec<_> = fields
        .into_par_iter()
        .enumerate()
        .map(|(id, spec)| {
            let start = Instant::now();
            let outcome = analyze(&spec.field(), s);
            FieldResult { id, attempts: 1, spec, outcome, seconds: start.elapsed().as_secs_f64() }
        })
        .collect();
    out.sort_by_key(|r| r.id);
    out
}

fn status(r: &FieldResult) -> &'static str {
    match &r.outcome {
        Ok(a) if generic(a) => "ok",
        Ok(_) => "non_generic",
        Err(CliError::OutOfTheory(_)) => "not_proper",
        Err(_) => "failed",
    }
}

pub fn field_json(r: &FieldResult) -> Value {
    let mut v = json!({
        "id": r.id,
        "attempts": r.attempts,
        "spec": r.spec,
        "status": status(r),
    });
    match &r.outcome {
        Ok(a) => {
            let count = |k| a.points.iter().filter(|p| p.kind == k).count();
            v["degree"] = json!({
                "winding": a.degree.winding,
                "hessian_sum": a.degree.hessian_sum,
                "morse_count": a.degree.morse_count,
                "consistent": a.degree.consistent,
            });
            v["zeros"] = json!({
                "source": count(CriticalKind::Source),
                "sink": count(CriticalKind::Sink),
                "saddle": count(CriticalKind::Saddle),
                "degenerate": count(CriticalKind::Degenerate),
            });
            v["betti"] = json!(a.betti.as_array());
            v["euler_matches_degree"] = json!(a.betti.euler() == a.degree.winding);
            v["lemmas"] = a.lemmas.as_ref().map_or(Value::Null, lemmas_json);
        }
        Err(e) => v["error"] = json!(e.to_string()),
    }
    v
}

/// Totals over the fields. Lemma counts cover generic fields only.
pub fn aggregate(results: &[FieldResult]) -> Value {
    let mut by_status: BTreeMap<&str, usize> = BTreeMap::new();
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    let mut max_degree: Option<i64> = None;
    let (mut inconsistent, mut euler_mismatch, mut above_one) = (0, 0, 0);
    let mut viol: BTreeMap<&str, usize> =
        ["lyapunov", "openness", "uniqueness", "key", "height", "degree_graph"].into_iter().map(|k| (k, 0)).collect();
    let mut checked: BTreeMap<&str, usize> = ["openness", "key", "height"].into_iter().map(|k| (k, 0)).collect();
    for r in results {
        *by_status.entry(status(r)).or_default() += 1;
        let Ok(a) = &r.outcome else { continue };
        let d = a.degree.winding;
        max_degree = Some(max_degree.map_or(d, |m| m.max(d)));
        *histogram.entry(d.to_string()).or_default() += 1;
        inconsistent += usize::from(!a.degree.consistent && generic(a));
        euler_mismatch += usize::from(a.betti.euler() != d);
        above_one += usize::from(d > 1);
        if let (true, Some(l)) = (generic(a), &a.lemmas) {
            *viol.get_mut("lyapunov").unwrap() += l.lyapunov_violations;
            *viol.get_mut("openness").unwrap() += l.openness_violations;
            *viol.get_mut("uniqueness").unwrap() += l.uniqueness_violations;
            *viol.get_mut("key").unwrap() += l.key_violations;
            *viol.get_mut("height").unwrap() += l.height_violations;
            *viol.get_mut("degree_graph").unwrap() += usize::from(l.degree_graph_ok == Some(false));
            *checked.get_mut("openness").unwrap() += l.openness_checked;
            *checked.get_mut("key").unwrap() += l.key_checked;
            *checked.get_mut("height").unwrap() += l.height_checked;
        }
    }
    let total: usize = viol.values().sum();
    json!({
        "count": results.len(),
        "status": by_status,
        "max_degree": max_degree,
        "degree_histogram": histogram,
        "degree_above_one": above_one,
        "degree_inconsistent": inconsistent,
        "euler_mismatches": euler_mismatch,
        "lemma_violations": viol,
        "lemma_checked": checked,
        "total_violations": total,
    })
}

pub fn timing(results: &[FieldResult], total: f64) -> Value {
    json!({
        "total_seconds": total,
        "fields": results.iter().map(|r| json!({"id": r.id, "seconds": r.seconds})).collect::<Vec<_>>(),
    })
}
