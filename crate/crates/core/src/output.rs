//! Numeric CSV and key=value formatting.
//!
//! Numbers are rounded to the requested number of significant digits and then
//! printed in the shortest form that parses back to the rounded value.

use std::fmt::Write as _;

pub const DEFAULT_PRECISION: usize = 17;

/// Round `v` to `digits` significant digits (1..=17).
pub fn round_sig(v: f64, digits: usize) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    let digits = digits.clamp(1, 17);
    format!("{:.*e}", digits - 1, v).parse().unwrap_or(v)
}

/// Shortest round-trip text for `v` at `digits` significant digits.
pub fn format_number(v: f64, digits: usize) -> String {
    let r = round_sig(v, digits);
    if r == 0.0 {
        // also folds -0 into 0
        return "0".to_string();
    }
    let a = r.abs();
    if (1e-5..1e16).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// CSV text with a header row and LF line endings.
pub fn csv<R: AsRef<[f64]>>(header: &[&str], rows: impl IntoIterator<Item = R>, digits: usize) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.as_ref().iter().map(|&v| format_number(v, digits)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// `key=value` lines.
pub fn key_values<'a>(pairs: impl IntoIterator<Item = (&'a str, String)>) -> String {
    let mut out = String::new();
    for (k, v) in pairs {
        let _ = writeln!(out, "{k}={v}");
    }
    out
}
