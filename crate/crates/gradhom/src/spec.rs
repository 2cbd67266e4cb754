//! Field-spec documents: `{"terms": [...], "sign": 1 | -1}`.

use std::path::Path;

use gradhom_core::math::Vec2;
use gradhom_core::{GradientField, Potential, PotentialTerm, Sign};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed field spec: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field spec has no terms")]
    EmptyTerms,
    #[error("term {index}: {reason}")]
    BadTerm { index: usize, reason: &'static str },
    #[error("sign must be 1 or -1, got {0}")]
    BadSign(i64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum TermSpec {
    Monomial { c: f64, i: u32, j: u32 },
    Gauss { a: f64, cx: f64, cy: f64, sigma: f64 },
    Radial { c: f64, p: u32 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub terms: Vec<TermSpec>,
    #[serde(default = "plus_one")]
    pub sign: i64,
}

fn plus_one() -> i64 {
    1
}

impl TermSpec {
    fn check(&self, index: usize) -> Result<(), SpecError> {
        let bad = |reason| Err(SpecError::BadTerm { index, reason });
        match *self {
            TermSpec::Monomial { c, .. } if !c.is_finite() => bad("coefficient is not finite"),
            TermSpec::Gauss { a, cx, cy, sigma } if ![a, cx, cy, sigma].iter().all(|v| v.is_finite()) => {
                bad("parameter is not finite")
            }
            TermSpec::Gauss { sigma, .. } if sigma <= 0.0 => bad("sigma must be positive"),
            TermSpec::Radial { c, .. } if !c.is_finite() => bad("coefficient is not finite"),
            TermSpec::Radial { p: 0, .. } => bad("radial power p must be at least 1"),
            _ => Ok(()),
        }
    }

    pub fn to_term(&self) -> PotentialTerm {
        match *self {
            TermSpec::Monomial { c, i, j } => PotentialTerm::monomial(c, i, j),
            TermSpec::Gauss { a, cx, cy, sigma } => PotentialTerm::gauss(a, Vec2::new(cx, cy), sigma),
            TermSpec::Radial { c, p } => PotentialTerm::radial(c, p),
        }
    }
}

impl FieldSpec {
    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let spec: FieldSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, SpecError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| SpecError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.terms.is_empty() {
            return Err(SpecError::EmptyTerms);
        }
        if self.sign != 1 && self.sign != -1 {
            return Err(SpecError::BadSign(self.sign));
        }
        for (k, t) in self.terms.iter().enumerate() {
            t.check(k)?;
        }
        Ok(())
    }

    pub fn field(&self) -> GradientField {
        let p = Potential::new(self.terms.iter().map(TermSpec::to_term).collect());
        GradientField::with_sign(p, if self.sign < 0 { Sign::Minus } else { Sign::Plus })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("field specs serialize")
    }
}
