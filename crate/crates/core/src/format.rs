//! Output formatting shared by the CSV and JSON emitters.
//!
//! Every real is printed with 17 significant digits, the same text `%.17g`
//! produces, so values round-trip through `f64` exactly.

use std::io::{self, Write};

use serde_json::Value;

/// Formats `x` like C's `%.17g`.
pub fn sig17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        let m = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Serializes a JSON value, printing non-integral numbers with [`sig17`].
/// Non-finite reals become `null`.
pub fn write_json(out: &mut dyn Write, v: &Value) -> io::Result<()> {
    match v {
        Value::Null => write!(out, "null"),
        Value::Bool(b) => write!(out, "{b}"),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                write!(out, "{i}")
            } else if let Some(u) = n.as_u64() {
                write!(out, "{u}")
            } else {
                let x = n.as_f64().unwrap_or(f64::NAN);
                if x.is_finite() {
                    write!(out, "{}", sig17(x))
                } else {
                    write!(out, "null")
                }
            }
        }
        Value::String(s) => write!(out, "{}", Value::String(s.clone())),
        Value::Array(items) => {
            write!(out, "[")?;
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    write!(out, ",")?;
                }
                write_json(out, item)?;
            }
            write!(out, "]")
        }
        Value::Object(map) => {
            write!(out, "{{")?;
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    write!(out, ",")?;
                }
                write!(out, "{}:", Value::String(k.clone()))?;
                write_json(out, item)?;
            }
            write!(out, "}}")
        }
    }
}

pub fn to_json_string(v: &Value) -> String {
    let mut buf = Vec::new();
    write_json(&mut buf, v).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("json is utf-8")
}
