use std::fmt::Write as _;

use flp_core::ultimate::ValueMethod;
use flp_core::{Interpretation, InterpretationPair, TruthValue};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

/// What a command produced: a verdict, a human rendering and the fields of
/// the structured document.
#[derive(Debug)]
pub struct Report {
    pub kind: &'static str,
    pub passed: bool,
    pub human: String,
    pub fields: Map<String, Value>,
}

impl Report {
    pub fn new(kind: &'static str) -> Report {
        Report {
            kind,
            passed: true,
            human: String::new(),
            fields: Map::new(),
        }
    }

    pub fn line(&mut self, text: impl AsRef<str>) {
        self.human.push_str(text.as_ref());
        self.human.push('\n');
    }

    pub fn field(&mut self, key: &str, value: impl Serialize) {
        self.fields
            .insert(key.to_string(), serde_json::to_value(value).expect("serialisable field"));
    }

    /// Records a check; the report passes only if every check does.
    pub fn check(&mut self, name: &str, ok: bool) {
        self.passed &= ok;
        let checks = self.fields.entry("checks").or_insert_with(|| Value::Object(Map::new()));
        checks
            .as_object_mut()
            .expect("checks is an object")
            .insert(name.to_string(), Value::Bool(ok));
    }

    pub fn render(&self, config: &RunConfig) -> String {
        match config.format {
            Format::Human => self.human.clone(),
            Format::Structured => {
                let mut doc = self.fields.clone();
                doc.insert("program".into(), json!(config.program.display().to_string()));
                doc.insert("config".into(), serde_json::to_value(config).expect("serialisable config"));
                doc.insert("kind".into(), json!(self.kind));
                doc.insert("passed".into(), json!(self.passed));
                let mut out = serde_json::to_string_pretty(&Value::Object(doc)).expect("serialisable document");
                out.push('\n');
                out
            }
        }
    }
}

#[derive(Serialize)]
struct Bound {
    atom: String,
    lower: String,
    upper: String,
    lower_decimal: f64,
    upper_decimal: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<String>,
}

#[derive(Serialize)]
struct Assignment {
    atom: String,
    value: String,
    decimal: f64,
}

pub fn bounds_value(pair: &InterpretationPair, methods: Option<&[ValueMethod]>) -> Value {
    let rows: Vec<Bound> = pair
        .rows()
        .enumerate()
        .map(|(i, (a, l, u))| Bound {
            atom: a.to_string(),
            lower: l.to_string(),
            upper: u.to_string(),
            lower_decimal: l.to_f64(),
            upper_decimal: u.to_f64(),
            method: methods.map(|m| m[i].to_string()),
        })
        .collect();
    serde_json::to_value(rows).expect("serialisable bounds")
}

pub fn interpretation_value(i: &Interpretation) -> Value {
    let rows: Vec<Assignment> = i
        .iter()
        .map(|(a, v)| Assignment {
            atom: a.to_string(),
            value: v.to_string(),
            decimal: v.to_f64(),
        })
        .collect();
    serde_json::to_value(rows).expect("serialisable interpretation")
}

/// One `p ∈ [l, u]` line per atom.
pub fn bounds_text(pair: &InterpretationPair, methods: Option<&[ValueMethod]>) -> String {
    let mut out = String::new();
    for (i, (a, l, u)) in pair.rows().enumerate() {
        let _ = write!(out, "  {a} ∈ [{l}, {u}]");
        if let Some(m) = methods {
            let _ = write!(out, "  ({})", m[i]);
        }
        out.push('\n');
    }
    out
}

/// `(0.3, 0.0, 1.0)`, in signature order.
pub fn decimal_row<'a>(values: impl IntoIterator<Item = &'a TruthValue>) -> String {
    let parts: Vec<String> = values.into_iter().map(TruthValue::to_decimal_string).collect();
    format!("({})", parts.join(", "))
}
