//! Result tables and their byte-deterministic serialization.
//!
//! A sweep produces one rectangular table: grid columns first, then the
//! operation's output columns, then a trailing `error` column that is empty
//! on successful rows and carries the model's message on rows that failed.
//! Failed rows keep NaN in their numeric cells so the table stays
//! rectangular.
//!
//! Emission is byte-deterministic for a fixed config and tool version:
//! numeric cells are printed with 17 significant digits (enough to round-trip
//! any f64 bit-exactly), rows are already in lexicographic grid order, JSON
//! object keys are sorted, and volatile facts (wall time, worker count) stay
//! out of the serialized form.  Two runs of the same config therefore hash
//! identically, whatever the machine load or thread count.

use std::io::Write as _;
use std::path::Path;
use std::time::Duration;

use crate::error::{CliError, Result};

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::Usage(format!(
                "unknown format `{other}`; valid formats: csv, json"
            ))),
        }
    }
}

/// A power-law fit attached to the table by [`crate::runner::fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitSummary {
    pub x: String,
    pub y: String,
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

/// Table provenance: config echo, tool identity, measured wall time.
///
/// `wall_time` and the worker count are deliberately never serialized;
/// they are reported on stderr instead, keeping emitted bytes identical
/// across repeated and differently parallelized runs.
#[derive(Debug, Clone)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub model: String,
    pub operation: String,
    /// Parameter bindings as given, in command-line order.
    pub bindings: Vec<(String, String)>,
    pub format: Format,
    pub seed: u64,
    pub strict: bool,
    pub fits: Vec<FitSummary>,
    pub wall_time: Option<Duration>,
}

/// One sweep point: numeric cells aligned with the column list, plus the
/// error channel (empty string on success).
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub values: Vec<f64>,
    pub error: String,
}

/// Rectangular numeric table with provenance.
#[derive(Debug, Clone)]
pub struct ResultTable {
    /// Numeric column names; the serialized form appends `error` last.
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    pub meta: Meta,
}

impl ResultTable {
    pub fn is_rectangular(&self) -> bool {
        self.rows.iter().all(|r| r.values.len() == self.columns.len())
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns.iter().position(|c| c == name).ok_or_else(|| {
            CliError::Usage(format!(
                "no column `{name}`; available: {}",
                self.columns.join(", ")
            ))
        })
    }

    /// Paired (x, y) data from rows that evaluated cleanly.
    pub fn paired_ok(&self, x: &str, y: &str) -> Result<(Vec<f64>, Vec<f64>)> {
        let (ix, iy) = (self.column_index(x)?, self.column_index(y)?);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for row in self.rows.iter().filter(|r| r.error.is_empty()) {
            xs.push(row.values[ix]);
            ys.push(row.values[iy]);
        }
        Ok((xs, ys))
    }
}

/// 17-significant-digit decimal form; round-trips every finite f64
/// bit-exactly through `str::parse`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{v:.16e}")
    }
}

fn render_csv(table: &ResultTable) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header: Vec<&str> = table.columns.iter().map(String::as_str).collect();
    header.push("error");
    w.write_record(&header).expect("write to Vec cannot fail");
    for row in &table.rows {
        let mut record: Vec<String> = row.values.iter().map(|&v| format_float(v)).collect();
        record.push(row.error.clone());
        w.write_record(&record).expect("write to Vec cannot fail");
    }
    w.into_inner().expect("flush to Vec cannot fail")
}

fn render_json(table: &ResultTable) -> Vec<u8> {
    use serde_json::{json, Map, Value};

    let mut columns: Vec<Value> = table.columns.iter().map(|c| json!(c)).collect();
    columns.push(json!("error"));

    let mut meta = Map::new();
    meta.insert("tool".into(), json!(table.meta.tool));
    meta.insert("version".into(), json!(table.meta.version));
    meta.insert("model".into(), json!(table.meta.model));
    meta.insert("operation".into(), json!(table.meta.operation));
    meta.insert(
        "bindings".into(),
        Value::Array(
            table.meta.bindings.iter().map(|(k, v)| json!([k, v])).collect(),
        ),
    );
    meta.insert("columns".into(), Value::Array(columns));
    meta.insert("format".into(), json!(table.meta.format.name()));
    meta.insert("seed".into(), json!(table.meta.seed));
    meta.insert("strict".into(), json!(table.meta.strict));
    meta.insert(
        "fits".into(),
        Value::Array(
            table
                .meta
                .fits
                .iter()
                .map(|f| {
                    json!({
                        "x": f.x,
                        "y": f.y,
                        "exponent": f.exponent,
                        "prefactor": f.prefactor,
                        "r_squared": f.r_squared,
                    })
                })
                .collect(),
        ),
    );

    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut cells: Vec<Value> = row
                .values
                .iter()
                .map(|&v| serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number))
                .collect();
            cells.push(json!(row.error));
            Value::Array(cells)
        })
        .collect();

    let doc = json!({ "meta": Value::Object(meta), "rows": rows });
    let mut bytes = serde_json::to_vec(&doc).expect("in-memory JSON cannot fail");
    bytes.push(b'\n');
    bytes
}

/// Serialized bytes in the table's own format.  Pure function of the table
/// content minus the volatile meta fields.
pub fn render(table: &ResultTable) -> Vec<u8> {
    match table.meta.format {
        Format::Csv => render_csv(table),
        Format::Json => render_json(table),
    }
}

/// Writes the rendered table to `path`, or to stdout when no path is given.
pub fn emit(table: &ResultTable, path: Option<&Path>) -> Result<()> {
    let bytes = render(table);
    match path {
        Some(p) => std::fs::write(p, &bytes)
            .map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(format: Format) -> ResultTable {
        ResultTable {
            columns: vec!["g".into(), "qfi".into()],
            rows: vec![
                Row { values: vec![0.1, 2.5e-3], error: String::new() },
                Row { values: vec![1.0, f64::NAN], error: "domain: test".into() },
            ],
            meta: Meta {
                tool: "critmet",
                version: "0.0.0",
                model: "lz".into(),
                operation: "qfi".into(),
                bindings: vec![("omega".into(), "1".into()), ("g".into(), "0:3:4".into())],
                format,
                seed: 42,
                strict: false,
                fits: vec![],
                wall_time: Some(Duration::from_millis(5)),
            },
        }
    }

    #[test]
    fn float_formatting_round_trips_bit_exactly() {
        let cases = [
            0.0,
            -0.0,
            1.0,
            10.0,
            std::f64::consts::PI,
            1.0 / 3.0,
            2.5e-317,
            -9.87654321e250,
            f64::MIN_POSITIVE,
            f64::MAX,
        ];
        for v in cases {
            let s = format_float(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v} -> {s} -> {back}");
        }
        assert_eq!(format_float(f64::NAN), "NaN");
        assert!(format_float(f64::NAN).parse::<f64>().unwrap().is_nan());
        assert_eq!(format_float(f64::INFINITY), "inf");
        assert_eq!(format_float(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn csv_shape_lf_only_and_error_column() {
        let bytes = render(&sample(Format::Csv));
        let text = String::from_utf8(bytes).unwrap();
        assert!(!text.contains('\r'), "CSV must use LF line endings");
        assert!(text.ends_with('\n'));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "g,qfi,error");
        let fields: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(fields.len(), 3);
        assert_eq!(fields[1].parse::<f64>().unwrap().to_bits(), 2.5e-3_f64.to_bits());
        assert_eq!(fields[2], "");
        assert!(lines[2].contains("NaN"));
        assert!(lines[2].contains("domain: test"));
    }

    #[test]
    fn json_shape_meta_echo_and_nan_as_null() {
        let bytes = render(&sample(Format::Json));
        let doc: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(doc["meta"]["model"], "lz");
        assert_eq!(doc["meta"]["bindings"][0][0], "omega");
        assert_eq!(doc["meta"]["bindings"][0][1], "1");
        assert_eq!(doc["meta"]["columns"].as_array().unwrap().len(), 3);
        let rows = doc["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].as_array().unwrap().len(), 3);
        assert_eq!(rows[0][1], 2.5e-3);
        assert!(rows[1][1].is_null());
        assert_eq!(rows[1][2], "domain: test");
    }

    #[test]
    fn render_ignores_volatile_meta() {
        let mut a = sample(Format::Csv);
        let mut b = sample(Format::Csv);
        a.meta.wall_time = Some(Duration::from_secs(1));
        b.meta.wall_time = None;
        assert_eq!(render(&a), render(&b));
        a.meta.format = Format::Json;
        b.meta.format = Format::Json;
        assert_eq!(render(&a), render(&b));
    }

    #[test]
    fn missing_column_is_a_usage_error() {
        let t = sample(Format::Csv);
        assert!(matches!(t.column_index("nope"), Err(CliError::Usage(_))));
        let (xs, ys) = t.paired_ok("g", "qfi").unwrap();
        assert_eq!(xs, vec![0.1]);
        assert_eq!(ys, vec![2.5e-3]);
    }
}
