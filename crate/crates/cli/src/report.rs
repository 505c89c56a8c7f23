//! Report JSON with fixed field order and 17 significant digits per float.

use std::fmt::Write as _;

/// Minimal ordered JSON tree; objects keep insertion order.
#[derive(Clone, Debug, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl From<f64> for Json {
    fn from(v: f64) -> Self {
        Json::Num(v)
    }
}

impl From<usize> for Json {
    fn from(v: usize) -> Self {
        Json::Int(v as i64)
    }
}

impl From<u64> for Json {
    fn from(v: u64) -> Self {
        Json::Int(v as i64)
    }
}

impl From<bool> for Json {
    fn from(v: bool) -> Self {
        Json::Bool(v)
    }
}

impl From<&str> for Json {
    fn from(v: &str) -> Self {
        Json::Str(v.to_string())
    }
}

impl From<String> for Json {
    fn from(v: String) -> Self {
        Json::Str(v)
    }
}

impl From<Vec<f64>> for Json {
    fn from(v: Vec<f64>) -> Self {
        Json::Arr(v.into_iter().map(Json::Num).collect())
    }
}

/// Non-finite floats have no JSON form and are written as `null`.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".into()
    }
}

impl Json {
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        let pad = |out: &mut String, k: usize| out.extend(std::iter::repeat(' ').take(2 * k));
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => write!(out, "{i}").unwrap(),
            Json::Num(v) => out.push_str(&format_float(*v)),
            Json::Str(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
            Json::Arr(items) if items.iter().all(|j| matches!(j, Json::Num(_) | Json::Int(_) | Json::Str(_))) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    item.write(out, indent);
                }
                out.push(']');
            }
            Json::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    out.push_str(if i == 0 { "\n" } else { ",\n" });
                    pad(out, indent + 1);
                    item.write(out, indent + 1);
                }
                if !items.is_empty() {
                    out.push('\n');
                    pad(out, indent);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    out.push_str(if i == 0 { "\n" } else { ",\n" });
                    pad(out, indent + 1);
                    out.push_str(&serde_json::to_string(k).expect("strings serialize"));
                    out.push_str(": ");
                    v.write(out, indent + 1);
                }
                if !fields.is_empty() {
                    out.push('\n');
                    pad(out, indent);
                }
                out.push('}');
            }
        }
    }
}

/// How a check compares its value with its limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Limit {
    Below(f64),
    Above(f64),
    Within(f64, f64),
}

impl Limit {
    pub fn admits(self, v: f64) -> bool {
        match self {
            Limit::Below(b) => v < b,
            Limit::Above(b) => v > b,
            Limit::Within(lo, hi) => lo <= v && v <= hi,
        }
    }

    fn to_json(self) -> (&'static str, Json) {
        match self {
            Limit::Below(b) => ("below", Json::Num(b)),
            Limit::Above(b) => ("above", Json::Num(b)),
            Limit::Within(lo, hi) => ("within", Json::Arr(vec![Json::Num(lo), Json::Num(hi)])),
        }
    }
}

/// One suite run: named paper anchors, parameters, plain metrics and
/// pass/fail checks, in insertion order.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub anchors: Vec<&'static str>,
    pub params: Vec<(String, Json)>,
    entries: Vec<(String, Json)>,
    failed: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { command: command.into(), anchors: Vec::new(), params: Vec::new(), entries: Vec::new(), failed: Vec::new() }
    }

    pub fn anchor(&mut self, name: &'static str) -> &mut Self {
        if !self.anchors.contains(&name) {
            self.anchors.push(name);
        }
        self
    }

    pub fn param(&mut self, name: &str, value: impl Into<Json>) -> &mut Self {
        self.params.push((name.into(), value.into()));
        self
    }

    pub fn metric(&mut self, name: &str, value: impl Into<Json>) -> &mut Self {
        self.entries.push((name.into(), value.into()));
        self
    }

    /// Records `value` against `limit`; NaN always fails.
    pub fn check(&mut self, name: &str, value: f64, limit: Limit) -> bool {
        let pass = limit.admits(value);
        self.record(name, Json::Num(value), limit, pass)
    }

    /// A check on a boolean property, e.g. strict monotonicity.
    pub fn check_flag(&mut self, name: &str, pass: bool) -> bool {
        self.entries.push((name.into(), Json::Obj(vec![("value".into(), pass.into()), ("pass".into(), pass.into())])));
        if !pass {
            self.failed.push(name.into());
        }
        pass
    }

    fn record(&mut self, name: &str, value: Json, limit: Limit, pass: bool) -> bool {
        let (kind, bound) = limit.to_json();
        self.entries.push((
            name.into(),
            Json::Obj(vec![("value".into(), value), (kind.into(), bound), ("pass".into(), pass.into())]),
        ));
        if !pass {
            self.failed.push(name.into());
        }
        pass
    }

    pub fn pass(&self) -> bool {
        self.failed.is_empty()
    }

    pub fn failed(&self) -> &[String] {
        &self.failed
    }

    /// Value of a metric or of a check, by name.
    pub fn get(&self, name: &str) -> Option<&Json> {
        let entry = &self.entries.iter().find(|(k, _)| k == name)?.1;
        match entry {
            Json::Obj(fields) => fields.iter().find(|(k, _)| k == "value").map(|(_, v)| v).or(Some(entry)),
            other => Some(other),
        }
    }

    pub fn get_f64(&self, name: &str) -> Option<f64> {
        match self.get(name)? {
            Json::Num(v) => Some(*v),
            Json::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Json {
        Json::Obj(vec![
            ("command".into(), self.command.as_str().into()),
            ("anchors".into(), Json::Arr(self.anchors.iter().map(|a| Json::from(*a)).collect())),
            ("params".into(), Json::Obj(self.params.clone())),
            ("pass".into(), self.pass().into()),
            ("failed".into(), Json::Arr(self.failed.iter().map(|f| Json::from(f.as_str())).collect())),
            ("metrics".into(), Json::Obj(self.entries.clone())),
        ])
    }

    pub fn render(&self) -> String {
        self.to_json().render()
    }
}
