#![allow(dead_code)]

use gradhom_core::math::Vec2;
use gradhom_core::{GradientField, Potential, PotentialTerm, Sign};
use serde_json::Value;

pub fn fixture(name: &str) -> Value {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    serde_json::from_str(&text).unwrap()
}

/// Field from a `{terms, sign}` document, trusting its shape.
pub fn field_of(spec: &Value) -> GradientField {
    let num = |t: &Value, k: &str| t[k].as_f64().unwrap();
    let nat = |t: &Value, k: &str| t[k].as_u64().unwrap() as u32;
    let terms = spec["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| match t["type"].as_str().unwrap() {
            "monomial" => PotentialTerm::monomial(num(t, "c"), nat(t, "i"), nat(t, "j")),
            "gauss" => PotentialTerm::gauss(num(t, "a"), Vec2::new(num(t, "cx"), num(t, "cy")), num(t, "sigma")),
            "radial" => PotentialTerm::radial(num(t, "c"), nat(t, "p")),
            other => panic!("unknown term {other}"),
        })
        .collect();
    let sign = if spec["sign"].as_i64() == Some(-1) { Sign::Minus } else { Sign::Plus };
    GradientField::with_sign(Potential::new(terms), sign)
}
