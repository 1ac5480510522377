//! JSON report plumbing: schema version and 17-significant-digit floats.

use serde::{Serialize, Serializer};
use serde_json::{Map, Number, Value};

pub const SCHEMA_VERSION: u32 = 1;

/// An `f64` that serializes with 17 significant digits. Non-finite values
/// become strings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sig17(pub f64);

impl Sig17 {
    pub fn text(self) -> String {
        format!("{:.16e}", self.0)
    }
}

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        sig17(self.0).serialize(s)
    }
}

pub fn sig17(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    let n: Number = serde_json::from_str(&Sig17(x).text()).expect("formatted float parses");
    Value::Number(n)
}

pub fn sig17_vec(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| sig17(x)).collect())
}

pub fn sig17_matrix(rows: &[Vec<f64>]) -> Value {
    Value::Array(rows.iter().map(|r| sig17_vec(r)).collect())
}

/// A named pass/fail comparison `value < tolerance`.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance, passed: value < tolerance }
    }

    /// A boolean condition with no numeric value.
    pub fn holds(name: impl Into<String>, passed: bool) -> Self {
        Self { name: name.into(), value: f64::from(u8::from(!passed)), tolerance: 0.5, passed }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("name".into(), Value::String(self.name.clone()));
        m.insert("value".into(), sig17(self.value));
        m.insert("tolerance".into(), sig17(self.tolerance));
        m.insert("passed".into(), Value::Bool(self.passed));
        Value::Object(m)
    }
}

/// `{"schema": 1, "command": …, "ok": …, "failures": […], "checks": […], …body}`.
pub fn envelope(command: &str, checks: &[Check], body: Map<String, Value>) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), Value::from(SCHEMA_VERSION));
    m.insert("command".into(), Value::String(command.into()));
    m.insert("ok".into(), Value::Bool(checks.iter().all(|c| c.passed)));
    m.insert(
        "failures".into(),
        Value::Array(
            checks.iter().filter(|c| !c.passed).map(|c| Value::String(c.name.clone())).collect(),
        ),
    );
    m.insert("checks".into(), Value::Array(checks.iter().map(Check::to_json).collect()));
    m.extend(body);
    Value::Object(m)
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        let s = serde_json::to_string(&sig17(1.0 / 3.0)).unwrap();
        assert_eq!(s, "3.3333333333333331e-1");
        let back: f64 = s.parse().unwrap();
        assert_eq!(back, 1.0 / 3.0);
        assert_eq!(serde_json::to_string(&Sig17(0.1)).unwrap(), "1.0000000000000001e-1");
        assert_eq!(sig17(f64::NAN), Value::String("NaN".into()));
    }

    #[test]
    fn envelope_lists_failures() {
        let checks = [Check::below("a", 1.0, 2.0), Check::below("b", 3.0, 2.0)];
        let v = envelope("x", &checks, Map::new());
        assert_eq!(v["schema"], 1);
        assert_eq!(v["ok"], false);
        assert_eq!(v["failures"], serde_json::json!(["b"]));
    }
}
