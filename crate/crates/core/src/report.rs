//! Deterministic report emission: canonical JSON (sorted keys, floats at 17
//! significant digits) and the CSV tables behind each scenario. Identical
//! inputs produce byte-identical output.

use num_complex::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scenario::PhaseFit;
use crate::spectral::{SpectrumReport, SpuriousZeroReport};

/// Serializes any value to canonical JSON: object keys sorted, every float
/// rendered as a fixed 17-significant-digit scientific literal (which
/// round-trips doubles exactly), no whitespace.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let value = serde_json::to_value(value)
        .map_err(|e| Error::InvalidInput(format!("serialization failed: {e}")))?;
    let mut out = String::new();
    write_value(&value, &mut out);
    Ok(out)
}

fn write_value(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&format_float(n.as_f64().unwrap()));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serialization is infallible"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        // serde_json's default map is ordered by key, so iteration is sorted
        Value::Object(map) => {
            out.push('{');
            for (i, (key, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("key serialization"));
                out.push(':');
                write_value(item, out);
            }
            out.push('}');
        }
    }
}

fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Shortest exact decimal for CSV cells; round-trips doubles bit-for-bit.
fn csv_num(x: f64) -> String {
    format!("{x}")
}

/// Trajectory table with header `t,re,im,modulus`.
pub fn trajectory_csv(times: &[f64], values: &[Complex64]) -> Result<String> {
    if times.len() != values.len() {
        return Err(Error::LengthMismatch {
            left: times.len(),
            right: values.len(),
        });
    }
    let mut out = String::from("t,re,im,modulus\n");
    for (t, v) in times.iter().zip(values) {
        out.push_str(&format!(
            "{},{},{},{}\n",
            csv_num(*t),
            csv_num(v.re),
            csv_num(v.im),
            csv_num(v.norm())
        ));
    }
    Ok(out)
}

/// Frequency table with header `k,omega,residual`; k is 1-based to match
/// the basis labels e_1, e_2, ...
pub fn frequencies_csv(fits: &[PhaseFit]) -> String {
    let mut out = String::from("k,omega,residual\n");
    for (i, fit) in fits.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{}\n",
            i + 1,
            csv_num(fit.omega),
            csv_num(fit.max_residual)
        ));
    }
    out
}

/// Spectrum table with header `re,im,residual,class,artifact_flag`.
pub fn spectrum_csv(report: &SpectrumReport) -> String {
    let mut out = String::from("re,im,residual,class,artifact_flag\n");
    for pair in &report.pairs {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            csv_num(pair.value.re),
            csv_num(pair.value.im),
            csv_num(pair.residual),
            pair.class.name(),
            pair.artifact
        ));
    }
    out
}

/// Spurious-zero table, one row per truncation dimension.
pub fn spurious_zero_csv(report: &SpuriousZeroReport) -> String {
    let mut out = String::from(
        "dim,zero_value_re,zero_value_im,zero_defect,purely_imaginary_count,artifact_flagged,pass\n",
    );
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            row.dim,
            csv_num(row.zero_value_re),
            csv_num(row.zero_value_im),
            csv_num(row.zero_defect),
            row.purely_imaginary_count,
            row.artifact_flagged,
            row.pass
        ));
    }
    out
}
