//! Deterministic JSON output: sorted keys, floats at 17 significant digits.

use hsvar::{Error, Result};
use serde::Serialize;
use serde_json::{Map, Number, Value};
use sha2::{Digest, Sha256};

/// Rewrites every float as `d.dddddddddddddddde±x` so reports do not depend
/// on shortest-representation heuristics.
fn fix_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("finite float");
            *n = serde_json::from_str::<Number>(&format!("{x:.16e}")).expect("formatted float parses");
        }
        Value::Array(items) => items.iter_mut().for_each(fix_floats),
        Value::Object(map) => map.values_mut().for_each(fix_floats),
        _ => {}
    }
}

pub fn to_value<S: Serialize>(v: &S) -> Result<Value> {
    let mut value = serde_json::to_value(v).map_err(|e| Error::Io(format!("serializing report: {e}")))?;
    fix_floats(&mut value);
    Ok(value)
}

/// Serializes `body` as an object and adds the envelope fields next to its own.
pub fn envelope<S: Serialize>(body: &S, extra: Vec<(&str, Value)>) -> Result<Value> {
    let mut map = match to_value(body)? {
        Value::Object(m) => m,
        other => {
            let mut m = Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    for (k, v) in extra {
        map.insert(k.to_string(), v);
    }
    Ok(Value::Object(map))
}

pub fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON value renders");
    s.push('\n');
    s
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
