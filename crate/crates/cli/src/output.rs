//! Artifacts: a table or a report plus provenance, rendered as CSV or JSON.
//!
//! CSV artifacts start with `#` comment lines carrying the provenance and
//! summary as compact JSON, followed by the header row and the data rows.
//! Numbers use the shortest representation that round-trips.

use std::io::{self, Write};

use levysup::QuadratureConfig;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_f64(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => num(*v),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

/// Shortest round-trip decimal form; non-finite values as `inf`, `-inf`, `nan`.
pub fn format_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:?}")
    }
}

/// JSON number, or the CSV spelling as a string when not finite.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(format_f64(v))
    }
}

/// Where an artifact came from. Worker counts are deliberately absent: they
/// never change results, and artifacts must be byte-identical across them.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub command: String,
    pub model: Option<String>,
    pub parameters: Map<String, Value>,
    pub quadrature: QuadratureConfig,
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(command: &str, model: Option<String>, quadrature: QuadratureConfig) -> Self {
        Self { command: command.into(), model, parameters: Map::new(), quadrature, seed: None }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.into(), value.into());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> Value {
        let q = &self.quadrature;
        json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "model": self.model,
            "parameters": self.parameters,
            "quadrature": {
                "abs_tol": num(q.abs_tol),
                "rel_tol": num(q.rel_tol),
                "max_depth": q.max_depth,
                "series_cap": q.series_cap,
            },
            "seed": self.seed,
        })
    }
}

/// A finished artifact. `summary` holds scalar results and metadata such as atoms and pass flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub provenance: Provenance,
    pub summary: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Artifact {
    pub fn new(provenance: Provenance, columns: &[&str]) -> Self {
        Self { provenance, summary: Map::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn summary(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.summary.insert(key.into(), value.into());
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "# provenance {}", self.provenance.to_json())?;
        if !self.summary.is_empty() {
            writeln!(out, "# summary {}", Value::Object(self.summary.clone()))?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    fn write_json(&self, out: &mut dyn Write) -> io::Result<()> {
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let doc = json!({
            "provenance": self.provenance.to_json(),
            "summary": self.summary,
            "columns": self.columns,
            "rows": rows,
        });
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1.0, 1e-300, 6.02214076e23, -2.5, f64::MIN_POSITIVE, 0.3989422804014327] {
            assert_eq!(format_f64(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_f64(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_layout() {
        let p = Provenance::new("marginal", Some("family=cauchy".into()), QuadratureConfig::default());
        let mut a = Artifact::new(p, &["x", "density"]).summary("atom", 0.0);
        a.push(vec![Cell::Num(0.5), Cell::Num(0.25)]);
        let mut buf = Vec::new();
        a.write(Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# provenance {"));
        assert!(lines[1].starts_with("# summary {"));
        assert_eq!(&lines[2..], ["x,density", "0.5,0.25"]);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn json_keys_are_sorted() {
        let p = Provenance::new("identity", None, QuadratureConfig::default()).param("zeta", 1.0).param("alpha", 2.0);
        let s = p.to_json().to_string();
        assert!(s.find("\"alpha\"").unwrap() < s.find("\"zeta\"").unwrap());
    }
}
