use super::config::Format;
use serde_json::{Map, Value};
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Clone)]
pub(crate) enum Cell {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format!("{v:.16e}"),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) if v.contains([',', '"', '\n']) => format!("\"{}\"", v.replace('"', "\"\"")),
            Cell::Text(v) => v.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Real(v) => Value::from(*v),
            Cell::Bool(v) => Value::from(*v),
            Cell::Text(v) => Value::from(v.as_str()),
        }
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Rendered result of a command.
pub(crate) struct Output {
    pub text: String,
    pub out: Option<PathBuf>,
    pub status: i32,
    pub diagnostics: Vec<String>,
}

impl Output {
    /// A JSON document carrying `schema: 1` and the command name ahead of `body`'s fields.
    pub fn json(command: &str, body: Map<String, Value>) -> String {
        let mut doc = Map::new();
        doc.insert("schema".into(), Value::from(1));
        doc.insert("command".into(), Value::from(command));
        doc.extend(body);
        let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
        text.push('\n');
        text
    }

    pub fn render(format: Format, command: &str, table: &Table, mut extra: Map<String, Value>) -> String {
        match format {
            Format::Csv => table.csv(),
            Format::Json => {
                extra.insert("rows".into(), table.json_rows());
                Self::json(command, extra)
            }
        }
    }

    pub fn emit(&self, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), String> {
        for line in &self.diagnostics {
            writeln!(stderr, "{line}").map_err(|e| e.to_string())?;
        }
        match &self.out {
            Some(path) => std::fs::write(path, &self.text)
                .map_err(|e| format!("cannot write {}: {e}", path.display())),
            None => stdout.write_all(self.text.as_bytes()).map_err(|e| e.to_string()),
        }
    }
}
