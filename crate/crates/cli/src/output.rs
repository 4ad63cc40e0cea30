use serde::Serialize;
use serde_json::Value;

pub const SIG_DIGITS: usize = 12;

/// Rounds to `SIG_DIGITS` significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with floats shown at display precision.
pub fn to_json<T: Serialize>(x: &T) -> String {
    let mut v = serde_json::to_value(x).expect("serializable output");
    round_value(&mut v);
    serde_json::to_string_pretty(&v).expect("json value")
}

/// Float formatted for CSV cells.
pub fn fmt_f64(x: f64) -> String {
    format!("{}", round_sig(x))
}
