//! Report documents and their three renderings.

use std::fmt::Write;

use clap::ValueEnum;
use spinxfer_core::linalg::CMatrix;
use spinxfer_core::Complex64;

use crate::number::{complex9, fixed6, sig9};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    #[value(name = "json-like")]
    JsonLike,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    /// Six decimals: fidelities, probabilities, energies.
    Fixed(f64),
    /// Physical quantities, nine significant digits.
    Sig(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Estimate {
        mean: f64,
        stderr: f64,
    },
    Complex(Complex64),
    Matrix(CMatrix),
    Check {
        ok: bool,
        measured: f64,
        threshold: f64,
        unit: &'static str,
    },
    Section(Document),
    Table(Table),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Plain CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| csv_cell(&scalar(v))).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Ordered key/value report.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Document {
    entries: Vec<(String, Value)>,
}

impl Document {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: Value) -> &mut Self {
        self.entries.push((key.into(), value));
        self
    }

    pub fn entries(&self) -> &[(String, Value)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Text => text(&mut out, self, 0),
            Format::Csv => {
                out.push_str("key,value\n");
                csv(&mut out, self, "");
            }
            Format::JsonLike => {
                json_doc(&mut out, self, 0);
                out.push('\n');
            }
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Fixed(x) => fixed6(*x),
        Value::Sig(x) => sig9(*x),
        Value::Int(n) => n.to_string(),
        Value::Text(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Estimate { mean, stderr } => format!("{} ± {}", fixed6(*mean), fixed6(*stderr)),
        Value::Complex(z) => complex9(*z),
        Value::Check { ok, measured, threshold, unit } => format!(
            "{} (measured {} {unit}, threshold {} {unit})",
            if *ok { "PASS" } else { "FAIL" },
            sig9(*measured),
            sig9(*threshold)
        ),
        Value::Matrix(_) | Value::Section(_) | Value::Table(_) => String::new(),
    }
}

/// Relative size below which a matrix component prints as zero, so that
/// rounding noise does not reach the report.
pub const MATRIX_NOISE_FLOOR: f64 = 1e-14;

/// Matrix with noise-level real and imaginary parts set to zero.
fn denoised(m: &CMatrix) -> CMatrix {
    let scale = (0..m.rows())
        .flat_map(|r| (0..m.cols()).map(move |c| (r, c)))
        .map(|(r, c)| m[(r, c)].norm())
        .fold(0.0, f64::max);
    let floor = scale * MATRIX_NOISE_FLOOR;
    let snap = |x: f64| if x.abs() < floor { 0.0 } else { x };
    CMatrix::from_fn(m.rows(), m.cols(), |r, c| Complex64::new(snap(m[(r, c)].re), snap(m[(r, c)].im)))
}

fn matrix_rows(m: &CMatrix) -> Vec<Vec<String>> {
    let m = denoised(m);
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| complex9(m[(r, c)])).collect()).collect()
}

fn text(out: &mut String, doc: &Document, indent: usize) {
    let pad = " ".repeat(indent);
    for (key, value) in &doc.entries {
        match value {
            Value::Section(d) => {
                let _ = writeln!(out, "{pad}{key}:");
                text(out, d, indent + 2);
            }
            Value::Matrix(m) => {
                let _ = writeln!(out, "{pad}{key}:");
                for row in matrix_rows(m) {
                    let _ = writeln!(out, "{pad}  [{}]", row.join(", "));
                }
            }
            Value::Table(t) => {
                let _ = writeln!(out, "{pad}{key}:");
                let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(scalar).collect()).collect();
                let widths: Vec<usize> = (0..t.columns.len())
                    .map(|c| {
                        cells
                            .iter()
                            .map(|r| r[c].chars().count())
                            .chain([t.columns[c].chars().count()])
                            .max()
                            .unwrap_or(0)
                    })
                    .collect();
                let line = |row: &[String]| {
                    let cols: Vec<String> = row
                        .iter()
                        .zip(&widths)
                        .map(|(s, w)| format!("{s}{}", " ".repeat(w - s.chars().count())))
                        .collect();
                    format!("{pad}  {}", cols.join("  ").trim_end())
                };
                let _ = writeln!(out, "{}", line(&t.columns));
                for row in &cells {
                    let _ = writeln!(out, "{}", line(row));
                }
            }
            v => {
                let _ = writeln!(out, "{pad}{key}: {}", scalar(v));
            }
        }
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv(out: &mut String, doc: &Document, prefix: &str) {
    for (key, value) in &doc.entries {
        let k = format!("{prefix}{key}");
        match value {
            Value::Section(d) => csv(out, d, &format!("{k}.")),
            Value::Matrix(m) => {
                for (r, row) in matrix_rows(m).into_iter().enumerate() {
                    for (c, z) in row.into_iter().enumerate() {
                        let _ = writeln!(out, "{k}[{r}][{c}],{z}");
                    }
                }
            }
            Value::Table(t) => {
                for (i, row) in t.rows.iter().enumerate() {
                    for (col, v) in t.columns.iter().zip(row) {
                        let _ = writeln!(out, "{k}[{i}].{col},{}", csv_cell(&scalar(v)));
                    }
                }
            }
            Value::Estimate { mean, stderr } => {
                let _ = writeln!(out, "{k},{}", fixed6(*mean));
                let _ = writeln!(out, "{k}_stderr,{}", fixed6(*stderr));
            }
            Value::Check { ok, measured, threshold, unit } => {
                let _ = writeln!(out, "{k}.status,{}", if *ok { "PASS" } else { "FAIL" });
                let _ = writeln!(out, "{k}.measured_{unit},{}", sig9(*measured));
                let _ = writeln!(out, "{k}.threshold_{unit},{}", sig9(*threshold));
            }
            v => {
                let _ = writeln!(out, "{k},{}", csv_cell(&scalar(v)));
            }
        }
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).unwrap_or_else(|_| "\"\"".into())
}

/// Number literal, quoted when JSON has no spelling for it.
fn json_num(s: String) -> String {
    if matches!(s.as_str(), "nan" | "inf" | "-inf") {
        json_str(&s)
    } else {
        s
    }
}

fn json_value(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Fixed(x) => out.push_str(&json_num(fixed6(*x))),
        Value::Sig(x) => out.push_str(&json_num(sig9(*x))),
        Value::Int(n) => out.push_str(&n.to_string()),
        Value::Text(s) => out.push_str(&json_str(s)),
        Value::Bool(b) => out.push_str(&b.to_string()),
        Value::Estimate { mean, stderr } => {
            let _ = write!(out, "{{\"mean\": {}, \"stderr\": {}}}", json_num(fixed6(*mean)), json_num(fixed6(*stderr)));
        }
        Value::Complex(z) => {
            let _ = write!(out, "[{}, {}]", json_num(sig9(z.re)), json_num(sig9(z.im)));
        }
        Value::Matrix(m) => {
            let m = &denoised(m);
            out.push('[');
            for r in 0..m.rows() {
                let cells: Vec<String> = (0..m.cols())
                    .map(|c| format!("[{}, {}]", json_num(sig9(m[(r, c)].re)), json_num(sig9(m[(r, c)].im))))
                    .collect();
                let sep = if r + 1 < m.rows() { "," } else { "" };
                let _ = write!(out, "\n{pad}  [{}]{sep}", cells.join(", "));
            }
            let _ = write!(out, "\n{pad}]");
        }
        Value::Check { ok, measured, threshold, unit } => {
            let _ = write!(
                out,
                "{{\"pass\": {ok}, \"measured\": {}, \"threshold\": {}, \"unit\": {}}}",
                json_num(sig9(*measured)),
                json_num(sig9(*threshold)),
                json_str(unit)
            );
        }
        Value::Section(d) => json_doc(out, d, indent),
        Value::Table(t) => {
            out.push('[');
            for (i, row) in t.rows.iter().enumerate() {
                let fields: Vec<String> = t
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| {
                        let mut s = String::new();
                        json_value(&mut s, v, indent + 2);
                        format!("{}: {s}", json_str(c))
                    })
                    .collect();
                let sep = if i + 1 < t.rows.len() { "," } else { "" };
                let _ = write!(out, "\n{pad}  {{{}}}{sep}", fields.join(", "));
            }
            if !t.rows.is_empty() {
                let _ = write!(out, "\n{pad}");
            }
            out.push(']');
        }
    }
}

fn json_doc(out: &mut String, doc: &Document, indent: usize) {
    let pad = " ".repeat(indent);
    out.push('{');
    for (i, (key, value)) in doc.entries.iter().enumerate() {
        let _ = write!(out, "\n{pad}  {}: ", json_str(key));
        json_value(out, value, indent + 2);
        if i + 1 < doc.entries.len() {
            out.push(',');
        }
    }
    if !doc.entries.is_empty() {
        let _ = write!(out, "\n{pad}");
    }
    out.push('}');
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Document {
        let mut inner = Document::new();
        inner.push("cptp", Value::Bool(true));
        let mut d = Document::new();
        d.push("case", Value::Text("A".into()))
            .push("round_trip_fidelity", Value::Fixed(1.0))
            .push("mean_fidelity", Value::Estimate { mean: 0.5, stderr: 0.01 })
            .push("tomography", Value::Section(inner));
        d
    }

    #[test]
    fn text_rendering() {
        assert_eq!(
            sample().render(Format::Text),
            "case: A\nround_trip_fidelity: 1.000000\nmean_fidelity: 0.500000 ± 0.010000\ntomography:\n  cptp: true\n"
        );
    }

    #[test]
    fn csv_rendering() {
        assert_eq!(
            sample().render(Format::Csv),
            "key,value\ncase,A\nround_trip_fidelity,1.000000\nmean_fidelity,0.500000\nmean_fidelity_stderr,0.010000\ntomography.cptp,true\n"
        );
    }

    #[test]
    fn json_rendering_parses() {
        let mut d = sample();
        d.push("m", Value::Matrix(CMatrix::identity(2)));
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![Value::Int(1), Value::Sig(f64::INFINITY)]);
        d.push("t", Value::Table(t));
        let s = d.render(Format::JsonLike);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["round_trip_fidelity"], serde_json::json!(1.0));
        assert_eq!(v["tomography"]["cptp"], serde_json::json!(true));
        assert_eq!(v["m"][1][1][0], serde_json::json!(1.0));
        assert_eq!(v["t"][0]["b"], serde_json::json!("inf"));
    }

    #[test]
    fn matrix_noise_is_dropped() {
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = Complex64::new(3e-17, 0.25);
        let mut d = Document::new();
        d.push("m", Value::Matrix(m));
        assert_eq!(
            d.render(Format::Text),
            "m:\n  [1.00000000+0.00000000i, 0.00000000+0.250000000i]\n  [0.00000000+0.00000000i, 1.00000000+0.00000000i]\n"
        );
    }

    #[test]
    fn table_csv() {
        let mut t = Table::new(&["x", "label"]);
        t.push(vec![Value::Fixed(0.25), Value::Text("a,b".into())]);
        assert_eq!(t.to_csv(), "x,label\n0.250000,\"a,b\"\n");
    }
}
