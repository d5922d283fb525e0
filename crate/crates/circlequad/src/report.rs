//! Deterministic output formatting: 15-significant-digit float printing for
//! CSV and stdout, JSON value helpers, and a minimal static SVG scatter for
//! node-configuration plots.
//!
//! Reproducibility contract: re-running an experiment with the same
//! configuration must produce byte-identical files. Everything here is a
//! pure function of its inputs — no timestamps, no locale, no environment
//! lookups — and all floating-point text goes through [`fmt_g`], which
//! implements a fixed 15-significant-digit rule (the `%.15g` convention:
//! positional notation while the decimal exponent lies in `[−4, 15)`,
//! scientific otherwise, trailing zeros trimmed). JSON output instead uses
//! `serde_json`'s shortest-roundtrip float encoding; the two conventions
//! are documented in `docs/formats.md`.

use crate::{C64, Error, Result};
use serde_json::json;

/// Formats a float with 15 significant digits, `%.15g`-style.
///
/// Style selection follows the C rule *after* rounding to 15 significant
/// digits: let `X` be the decimal exponent of the rounded value; positional
/// notation with `14 − X` fraction digits when `−4 ≤ X < 15`, otherwise
/// scientific with a 14-digit mantissa fraction. Trailing zeros (and a bare
/// trailing point) are removed. Exponents print as Rust emits them
/// (`e5`, `e-7` — no `+`, no zero padding).
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let e_repr = format!("{:.14e}", x);
    let epos = e_repr.find('e').expect("float e-format always contains e");
    let exp: i32 = e_repr[epos + 1..].parse().expect("exponent parses");
    if !(-4..15).contains(&exp) {
        let mant = e_repr[..epos].trim_end_matches('0').trim_end_matches('.');
        format!("{mant}{}", &e_repr[epos..])
    } else {
        let prec = (14 - exp) as usize;
        let s = format!("{x:.prec$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    }
}

/// Formats a complex number as `a+bi` / `a-bi` with [`fmt_g`] parts
/// (`b = 0` still prints, keeping column shapes stable).
pub fn fmt_complex(z: C64) -> String {
    let re = fmt_g(z.re);
    if z.im.is_sign_negative() {
        format!("{re}-{}i", fmt_g(-z.im))
    } else {
        format!("{re}+{}i", fmt_g(z.im))
    }
}

/// JSON object `{"re": …, "im": …}` for a complex value.
pub fn json_complex(z: C64) -> serde_json::Value {
    json!({ "re": z.re, "im": z.im })
}

/// Renders rows to CSV (RFC-4180 quoting via the `csv` crate). Callers are
/// responsible for having passed numeric cells through [`fmt_g`].
pub fn csv_string(headers: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(headers)
        .map_err(|e| Error::Numerical(format!("csv write failed: {e}")))?;
    for row in rows {
        if row.len() != headers.len() {
            return Err(Error::Domain(format!(
                "csv row has {} cells for {} headers",
                row.len(),
                headers.len()
            )));
        }
        w.write_record(row)
            .map_err(|e| Error::Numerical(format!("csv write failed: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Numerical(format!("csv flush failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Numerical(format!("csv not utf-8: {e}")))
}

/// One labeled point set for [`svg_scatter`].
#[derive(Clone, Debug)]
pub struct ScatterSeries {
    /// Legend label.
    pub label: String,
    /// Any SVG color string.
    pub color: String,
    /// Points in the complex plane.
    pub points: Vec<(f64, f64)>,
    /// Marker radius in plot units (the unit circle has radius 1).
    pub radius: f64,
    /// Filled discs vs outlined rings (rings let overlapping sets of
    /// markers stay readable, e.g. selected grid nodes on top of zeros).
    pub filled: bool,
}

/// Static SVG scatter plot of point sets over the unit circle.
///
/// Fixed 640×640 canvas, axes-free, unit circle drawn for reference,
/// legend in the top-left. Deterministic output: coordinates print with
/// six decimals and series render in the order given.
pub fn svg_scatter(title: &str, series: &[ScatterSeries]) -> String {
    const SIZE: f64 = 640.0;
    const HALF: f64 = SIZE / 2.0;
    // 1.25 plot units of headroom around the unit circle.
    const SCALE: f64 = HALF / 1.25;
    let px = |x: f64| HALF + SCALE * x;
    let py = |y: f64| HALF - SCALE * y;

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" \
         viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    s.push_str(&format!(
        "  <rect width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>\n"
    ));
    s.push_str(&format!(
        "  <circle cx=\"{HALF}\" cy=\"{HALF}\" r=\"{SCALE}\" fill=\"none\" \
         stroke=\"#cccccc\" stroke-width=\"1\"/>\n"
    ));
    s.push_str(&format!(
        "  <text x=\"{HALF}\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" \
         font-size=\"16\">{}</text>\n",
        xml_escape(title)
    ));
    for (i, ser) in series.iter().enumerate() {
        let r = ser.radius * SCALE;
        for &(x, y) in &ser.points {
            if ser.filled {
                s.push_str(&format!(
                    "  <circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"{}\"/>\n",
                    px(x),
                    py(y),
                    r,
                    ser.color
                ));
            } else {
                s.push_str(&format!(
                    "  <circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\" fill=\"none\" \
                     stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                    px(x),
                    py(y),
                    r,
                    ser.color
                ));
            }
        }
        let ly = 48.0 + 20.0 * i as f64;
        s.push_str(&format!(
            "  <circle cx=\"20\" cy=\"{:.6}\" r=\"5\" fill=\"{}\"/>\n",
            ly - 5.0,
            ser.color
        ));
        s.push_str(&format!(
            "  <text x=\"32\" y=\"{:.6}\" font-family=\"monospace\" font-size=\"13\">{}</text>\n",
            ly,
            xml_escape(&ser.label)
        ));
    }
    s.push_str("</svg>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
