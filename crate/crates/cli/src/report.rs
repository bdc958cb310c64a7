//! Report rendering shared by every subcommand.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// A finished command run. `verified == false` maps to exit status 1.
pub struct Report {
    pub command: String,
    pub params: Vec<(String, String)>,
    pub result: Value,
    pub text: String,
    pub table: Option<Table>,
    /// Emit `result`'s fields at the top level of the JSON document, so that
    /// class outputs stay readable by the class parser.
    pub flatten: bool,
    pub verified: bool,
}

impl Report {
    pub fn new(command: impl Into<String>, params: Vec<(String, String)>, result: Value) -> Self {
        Report { command: command.into(), params, result, text: String::new(), table: None, flatten: false, verified: true }
    }

    pub fn text(mut self, text: String) -> Self {
        self.text = text;
        self
    }

    pub fn table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.table = Some(Table { header: header.iter().map(|s| s.to_string()).collect(), rows });
        self
    }

    pub fn verified(mut self, ok: bool) -> Self {
        self.verified = ok;
        self
    }

    pub fn flatten(mut self) -> Self {
        self.flatten = true;
        self
    }

    fn header_lines(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("# dsbound {} {}\n# {}\n", env!("CARGO_PKG_VERSION"), self.command, params.join(" "))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = self.header_lines();
                if self.text.is_empty() {
                    out.push_str(&flat_text(&self.result));
                } else {
                    out.push_str(&self.text);
                }
                if !out.ends_with('\n') {
                    out.push('\n');
                }
                out
            }
            Format::Csv => {
                let mut out = self.header_lines();
                match &self.table {
                    Some(t) => {
                        out.push_str(&t.header.join(","));
                        out.push('\n');
                        for r in &t.rows {
                            out.push_str(&r.join(","));
                            out.push('\n');
                        }
                    }
                    None => {
                        out.push_str("key,value\n");
                        if let Value::Object(m) = &self.result {
                            for (k, v) in m {
                                let _ = writeln!(out, "{k},{}", csv_cell(v));
                            }
                        }
                    }
                }
                out
            }
            Format::Json => {
                let params: Map<String, Value> =
                    self.params.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
                let mut doc = Map::new();
                doc.insert("tool".into(), Value::String("dsbound".into()));
                doc.insert("version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
                doc.insert("command".into(), Value::String(self.command.clone()));
                doc.insert("params".into(), Value::Object(params));
                match (&self.result, self.flatten) {
                    (Value::Object(m), true) => doc.extend(m.clone()),
                    _ => {
                        doc.insert("result".into(), self.result.clone());
                    }
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON value serializes");
                s.push('\n');
                s
            }
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Null => Some("-".into()),
        Value::Bool(_) | Value::Number(_) => Some(v.to_string()),
        _ => None,
    }
}

fn csv_cell(v: &Value) -> String {
    let s = scalar(v).unwrap_or_else(|| v.to_string());
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

/// `key: value` lines for an object; nested values as compact JSON.
fn flat_text(v: &Value) -> String {
    match v {
        Value::Object(m) => {
            let mut out = String::new();
            for (k, v) in m {
                let shown = match v {
                    Value::Array(items) if items.iter().all(|x| scalar(x).is_some()) => {
                        items.iter().filter_map(scalar).collect::<Vec<_>>().join(" ")
                    }
                    _ => scalar(v).unwrap_or_else(|| v.to_string()),
                };
                let _ = writeln!(out, "{k}: {shown}");
            }
            out
        }
        _ => format!("{}\n", scalar(v).unwrap_or_else(|| v.to_string())),
    }
}
