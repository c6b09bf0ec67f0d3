//! Report emission: versioned JSON envelopes and RFC-4180 CSV tables.
//!
//! JSON reports have the shape
//! `{"schema": 1, "command", "seed", "tol_scale", "passed", "result"}` with
//! fields in that order. CSV tables always start with a header line, use LF
//! line endings, and are header-only when there are no rows.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: &'a str,
    seed: u64,
    tol_scale: f64,
    passed: bool,
    result: &'a T,
}

/// Run identification carried into every JSON envelope.
#[derive(Debug, Clone, Copy)]
pub struct RunMeta<'a> {
    pub command: &'a str,
    pub seed: u64,
    pub tol_scale: f64,
}

/// Everything a command produced, in each output form.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub passed: bool,
    pub text: String,
    pub json: String,
    pub csv: String,
}

impl Report {
    /// JSON envelope around `result`; the CSV form starts out empty until
    /// [`Report::table`] fills it.
    pub fn new<T: Serialize>(meta: RunMeta<'_>, passed: bool, result: &T, text: String) -> std::io::Result<Self> {
        let env = Envelope {
            schema: SCHEMA_VERSION,
            command: meta.command,
            seed: meta.seed,
            tol_scale: meta.tol_scale,
            passed,
            result,
        };
        let mut json = serde_json::to_string_pretty(&env).map_err(std::io::Error::other)?;
        json.push('\n');
        Ok(Self { command: meta.command.to_string(), passed, text, json, csv: String::new() })
    }

    pub fn table<R: Serialize>(mut self, headers: &[&str], rows: &[R]) -> std::io::Result<Self> {
        self.csv = csv_table(headers, rows)?;
        Ok(self)
    }

    pub fn render(&self, format: Format) -> &str {
        match format {
            Format::Json => &self.json,
            Format::Csv => &self.csv,
        }
    }
}

/// Header line followed by one record per row.
pub fn csv_table<R: Serialize>(headers: &[&str], rows: &[R]) -> std::io::Result<String> {
    let mut w =
        csv::WriterBuilder::new().has_headers(false).terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(headers).map_err(std::io::Error::other)?;
    for r in rows {
        w.serialize(r).map_err(std::io::Error::other)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    String::from_utf8(bytes).map_err(std::io::Error::other)
}

/// Writes `report` in `format` to `path`.
pub fn emit_report(report: &Report, format: Format, path: &Path) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(report.render(format).as_bytes())?;
    f.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        #[serde(rename = "R")]
        r: f64,
        deviation: f64,
    }

    #[test]
    fn empty_table_is_header_only() {
        let rows: Vec<Row> = Vec::new();
        assert_eq!(csv_table(&["R", "deviation"], &rows).unwrap(), "R,deviation\n");
        let one = csv_table(&["R", "deviation"], &[Row { r: 2.0, deviation: 0.25 }]).unwrap();
        assert_eq!(one, "R,deviation\n2.0,0.25\n");
    }

    #[test]
    fn envelope_starts_with_schema() {
        let meta = RunMeta { command: "mk", seed: 1, tol_scale: 1.0 };
        let r = Report::new(meta, true, &serde_json::json!({"value": 1.0}), "1".into()).unwrap();
        assert!(r.json.starts_with("{\n  \"schema\": 1,\n  \"command\": \"mk\""));
        let v: serde_json::Value = serde_json::from_str(&r.json).unwrap();
        assert_eq!(v["result"]["value"], 1.0);
    }
}
