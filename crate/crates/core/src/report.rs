//! Canonical JSON and CSV emission.
//!
//! JSON objects use sorted keys, exact integers are emitted as JSON numbers of
//! arbitrary size, and real numbers as decimal strings with 12 significant
//! digits.

use num_bigint::{BigInt, BigUint};
use serde_json::{Map, Number, Value};

/// Twelve significant digits, plain decimal when the magnitude allows it.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..15).contains(&mag) {
        let decimals = (11 - mag).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        trim_zeros(&s)
    } else {
        let s = format!("{:.11e}", x);
        let (mant, exp) = s.split_once('e').expect("exponent form");
        format!("{}e{}", trim_zeros(mant), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        t.to_string()
    } else {
        s.to_string()
    }
}

pub fn real(x: f64) -> Value {
    Value::String(fmt_real(x))
}

pub fn big(x: &BigUint) -> Value {
    Value::Number(x.to_string().parse::<Number>().expect("integer literal"))
}

pub fn big_signed(x: &BigInt) -> Value {
    Value::Number(x.to_string().parse::<Number>().expect("integer literal"))
}

pub fn int(x: impl Into<i128>) -> Value {
    let x: i128 = x.into();
    Value::Number(x.to_string().parse::<Number>().expect("integer literal"))
}

/// Builds an object from key/value pairs; keys end up sorted.
pub fn obj<I, K>(pairs: I) -> Value
where
    I: IntoIterator<Item = (K, Value)>,
    K: Into<String>,
{
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.into(), v);
    }
    Value::Object(m)
}

/// Canonical single-line JSON with a trailing newline.
pub fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable value");
    s.push('\n');
    s
}

pub fn to_json_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

/// CSV with a header row.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}
