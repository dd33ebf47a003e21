//! Machine-readable records. Every record is a JSON object with
//! `schema_version` and `command`; rationals are `"p/q"` strings, integers
//! are JSON numbers when they fit in `i64` and decimal strings otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use csn_core::invariants::HomologyClass;
use csn_core::Rational;

pub const SCHEMA_VERSION: u32 = 1;

pub fn rational(r: &Rational) -> Value {
    Value::String(r.canonical())
}

pub fn opt_rational(r: Option<&Rational>) -> Value {
    r.map_or(Value::Null, rational)
}

pub fn big(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => Value::String(n.to_string()),
    }
}

pub fn bigs(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(big).collect())
}

pub fn class(c: &HomologyClass) -> Value {
    json!({ "coords": bigs(&c.coords), "factors": bigs(&c.factors) })
}

/// Wraps `body` with the schema header.
pub fn record(command: &str, body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("command".into(), json!(command));
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Value::Object(m)
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
