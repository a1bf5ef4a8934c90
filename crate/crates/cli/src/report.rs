//! JSON helpers. Floats are written with 17 significant digits so that
//! every value parses back to the same double.

use hgmoment::{BigRational, Complex64};
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: &str = "1.0";

pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(sci(x).parse().expect("formatted float is valid JSON"))
}

pub fn complex(z: Complex64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), num(z.re));
    m.insert("im".into(), num(z.im));
    Value::Object(m)
}

pub fn rational(q: &BigRational) -> Value {
    Value::String(q.to_string())
}

pub fn floats(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| num(x)).collect())
}

/// Ordered object from key/value pairs.
pub fn obj<const N: usize>(pairs: [(&str, Value); N]) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}
