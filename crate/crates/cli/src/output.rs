//! Tables rendered as CSV or JSON lines.

use serde_json::{Map, Value};

use crate::config::Format;

pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Jsonl => self.jsonl(),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("writing to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(cell_text)).expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("writing to memory")).expect("csv output is utf-8")
    }

    fn jsonl(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let obj: Map<String, Value> = self.columns.iter().map(|c| c.to_string()).zip(row.iter().cloned()).collect();
            out.push_str(&Value::Object(obj).to_string());
            out.push('\n');
        }
        out
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell_text).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

pub fn text(s: impl ToString) -> Value {
    Value::String(s.to_string())
}

pub fn opt_text<T: ToString>(s: Option<T>) -> Value {
    s.map_or(Value::Null, text)
}
