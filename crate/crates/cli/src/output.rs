use serde::Serialize;
use serde_json::{json, Map, Value};

use ptmoments::scalar::{to_f64, to_parts};
use ptmoments::ExactScalar;

/// Exact value as decimal strings, e.g. `{"num": "8", "den": "3"}`.
pub fn exact(x: &ExactScalar) -> Value {
    let (num, den) = to_parts(x);
    json!({ "num": num, "den": den })
}

/// Tabular form used for `--format csv`.
#[derive(Debug, Default, Clone)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn exact_row(x: &ExactScalar) -> Self {
        let (num, den) = to_parts(x);
        let mut t = Self::new(&["num", "den", "approx"]);
        t.push(vec![num, den, to_f64(x).to_string()]);
        t
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

/// What a subcommand produced, before timing is attached.
pub struct Report {
    pub command: &'static str,
    pub parameters: Map<String, Value>,
    pub value: Value,
    pub cache_hit: Option<bool>,
    pub table: Table,
}

impl Report {
    pub fn new(command: &'static str, value: Value, table: Table) -> Self {
        Self { command, parameters: Map::new(), value, cache_hit: None, table }
    }

    pub fn param(mut self, key: &str, v: impl Serialize) -> Self {
        self.parameters.insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
        self
    }

    pub fn cache_hit(mut self, hit: bool) -> Self {
        self.cache_hit = Some(hit);
        self
    }
}

#[derive(Serialize)]
pub struct CommandResult<'a> {
    pub command: &'a str,
    pub parameters: &'a Map<String, Value>,
    pub value: &'a Value,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_hit: Option<bool>,
}
