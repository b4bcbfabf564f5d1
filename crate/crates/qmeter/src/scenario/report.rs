//! Deterministic scenario reports.
//!
//! JSON output is emitted by a byte-stable writer: keys sorted, floats
//! printed with 17 significant digits, no environment-dependent fields.
//! CSV flattens the same tree into `(path, value)` rows.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// One labeled value inside a report table.
#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub label: String,
    pub value: f64,
}

/// Scenario result: an echo of the inputs, scalar quantities, boolean
/// check flags, and labeled tables.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub scenario: BTreeMap<String, String>,
    pub scalars: BTreeMap<String, f64>,
    pub flags: BTreeMap<String, bool>,
    pub tables: BTreeMap<String, Vec<TableRow>>,
}

impl Report {
    pub fn new(kind: &str) -> Self {
        let mut report = Report::default();
        report.scenario.insert("kind".into(), kind.into());
        report
    }

    pub fn echo(&mut self, key: &str, value: impl ToString) {
        self.scenario.insert(key.into(), value.to_string());
    }

    pub fn scalar(&mut self, key: &str, value: f64) {
        self.scalars.insert(key.into(), value);
    }

    pub fn flag(&mut self, key: &str, value: bool) {
        self.flags.insert(key.into(), value);
    }

    pub fn table(&mut self, name: &str, rows: Vec<TableRow>) {
        self.tables.insert(name.into(), rows);
    }

    /// The scenario verdict: the `pass` flag, defaulting to true.
    pub fn passed(&self) -> bool {
        self.flags.get("pass").copied().unwrap_or(true)
    }

    fn check_finite(&self) -> Result<()> {
        let bad = self
            .scalars
            .iter()
            .find(|(_, v)| !v.is_finite())
            .map(|(k, _)| k.clone())
            .or_else(|| {
                self.tables.iter().find_map(|(name, rows)| {
                    rows.iter()
                        .find(|r| !r.value.is_finite())
                        .map(|r| format!("{name}[{}]", r.label))
                })
            });
        match bad {
            Some(key) => Err(Error::Scenario(format!("non-finite value at {key}"))),
            None => Ok(()),
        }
    }
}

/// Output encodings for [`emit_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Serializes a report. Identical reports produce identical bytes.
pub fn emit_report(report: &Report, format: ReportFormat) -> Result<Vec<u8>> {
    report.check_finite()?;
    Ok(match format {
        ReportFormat::Json => emit_json(report).into_bytes(),
        ReportFormat::Csv => emit_csv(report).into_bytes(),
    })
}

/// 17 significant digits, sign-normalized zero, valid JSON number syntax.
pub fn fmt_f64(value: f64) -> String {
    let value = if value == 0.0 { 0.0 } else { value };
    format!("{value:.16e}")
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn emit_json(report: &Report) -> String {
    let mut out = String::new();
    out.push_str("{\n  \"flags\": {");
    let mut first = true;
    for (k, v) in &report.flags {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str(&format!("\n    \"{}\": {}", escape(k), v));
    }
    out.push_str(if report.flags.is_empty() { "},\n" } else { "\n  },\n" });

    out.push_str("  \"scalars\": {");
    first = true;
    for (k, v) in &report.scalars {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str(&format!("\n    \"{}\": {}", escape(k), fmt_f64(*v)));
    }
    out.push_str(if report.scalars.is_empty() { "},\n" } else { "\n  },\n" });

    out.push_str("  \"scenario\": {");
    first = true;
    for (k, v) in &report.scenario {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str(&format!("\n    \"{}\": \"{}\"", escape(k), escape(v)));
    }
    out.push_str(if report.scenario.is_empty() { "},\n" } else { "\n  },\n" });

    out.push_str("  \"tables\": {");
    first = true;
    for (name, rows) in &report.tables {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str(&format!("\n    \"{}\": [", escape(name)));
        let mut first_row = true;
        for row in rows {
            if !first_row {
                out.push(',');
            }
            first_row = false;
            out.push_str(&format!(
                "\n      {{\"label\": \"{}\", \"value\": {}}}",
                escape(&row.label),
                fmt_f64(row.value)
            ));
        }
        out.push_str(if rows.is_empty() { "]" } else { "\n    ]" });
    }
    out.push_str(if report.tables.is_empty() { "}\n" } else { "\n  }\n" });
    out.push_str("}\n");
    out
}

fn csv_field(text: &str) -> String {
    if text.contains(',') || text.contains('"') || text.contains('\n') {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

fn emit_csv(report: &Report) -> String {
    let mut out = String::from("path,value\n");
    for (k, v) in &report.scenario {
        out.push_str(&format!("{},{}\n", csv_field(&format!("scenario.{k}")), csv_field(v)));
    }
    for (k, v) in &report.scalars {
        out.push_str(&format!("{},{}\n", csv_field(&format!("scalars.{k}")), fmt_f64(*v)));
    }
    for (k, v) in &report.flags {
        out.push_str(&format!("{},{}\n", csv_field(&format!("flags.{k}")), v));
    }
    for (name, rows) in &report.tables {
        for row in rows {
            out.push_str(&format!(
                "{},{}\n",
                csv_field(&format!("tables.{name}[{}]", row.label)),
                fmt_f64(row.value)
            ));
        }
    }
    out
}

/// Number of data rows [`emit_report`] produces in CSV form.
pub fn csv_row_count(report: &Report) -> usize {
    report.scenario.len()
        + report.scalars.len()
        + report.flags.len()
        + report.tables.values().map(Vec::len).sum::<usize>()
}
