use std::fmt::Write;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Rows of one command, with a fixed column order.
pub struct Table {
    command: String,
    parameters: Map<String, Value>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(command: &str, columns: &[&'static str]) -> Self {
        Table {
            command: command.to_string(),
            parameters: Map::new(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(cell).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    fn json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), v.clone()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("command".into(), Value::String(self.command.clone()));
        doc.insert("parameters".into(), Value::Object(self.parameters.clone()));
        doc.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
        s.push('\n');
        s
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
