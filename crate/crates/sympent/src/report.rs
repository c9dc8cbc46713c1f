//! JSON reports. Field order is fixed, rationals print as reduced `n/d`
//! strings and floats with 17 significant digits, so identical runs give
//! byte-identical output.

use serde::Serialize;
use serde_json::{Map, Number, Value};
use sympent_core::verify::Verdict;

/// One suite run. `runtime_ms` stays null unless timing was requested, which
/// keeps reports reproducible by default.
#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub d: u32,
    pub k: Option<u32>,
    pub params: Value,
    pub verdict: Verdict,
    pub seed: u64,
    pub runtime_ms: Option<u64>,
    /// Suite-specific fields appended after the common ones.
    pub extra: Map<String, Value>,
}

impl Report {
    pub fn new(suite: &str, d: u32, k: Option<u32>, seed: u64, verdict: Verdict) -> Self {
        Report {
            suite: suite.to_string(),
            d,
            k,
            params: Value::Object(Map::new()),
            verdict,
            seed,
            runtime_ms: None,
            extra: Map::new(),
        }
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("suite".into(), self.suite.clone().into());
        m.insert("d".into(), self.d.into());
        m.insert("k".into(), self.k.map_or(Value::Null, Value::from));
        m.insert("params".into(), self.params.clone());
        m.insert("passed".into(), self.verdict.passed.into());
        m.insert("n_evaluations".into(), self.verdict.n_evaluations.into());
        m.insert("min_margin".into(), float(self.verdict.min_margin));
        m.insert("seed".into(), self.seed.into());
        m.insert("runtime_ms".into(), self.runtime_ms.map_or(Value::Null, Value::from));
        if let Some(cx) = &self.verdict.counterexample {
            m.insert("counterexample".into(), to_json(cx));
        }
        for (k, v) in &self.extra {
            m.insert(k.clone(), v.clone());
        }
        Value::Object(m)
    }
}

/// A float as a JSON number with 17 significant digits; non-finite values
/// become null.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let s = format!("{x:.16e}");
    serde_json::from_str::<Number>(&s).map(Value::Number).unwrap_or(Value::Null)
}

/// Serializes with serde and rewrites every float to the fixed format.
pub fn to_json<T: Serialize>(x: &T) -> Value {
    normalize(serde_json::to_value(x).unwrap_or(Value::Null))
}

fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => n.as_f64().map_or(Value::Null, float),
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

pub fn render(v: &Value) -> String {
    serde_json::to_string(v).expect("json values always serialize")
}
