//! Uniform tabular output shared by the value-table subcommands.

use std::io::Write;

use serde_json::{Map, Value};

/// A table with named columns. Rendered as a JSON array of objects (keys in
/// column order) or as CSV with a header row.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<I, S>(columns: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match columns");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().cloned().zip(row.iter().cloned()).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer(&mut out, &self.to_json())?;
        out.write_all(b"\n")
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell_text))?;
        }
        w.flush()
    }
}

/// Text of a cell in CSV output; strings are written without quotes.
pub fn cell_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_keeps_column_order() {
        let mut t = Table::new(["k", "prob", "prob_exact"]);
        t.push(vec![json!(0), json!("2.5e-1"), json!("1/4")]);
        let text = serde_json::to_string(&t.to_json()).unwrap();
        assert_eq!(text, r#"[{"k":0,"prob":"2.5e-1","prob_exact":"1/4"}]"#);
    }

    #[test]
    fn csv_has_header_and_bare_strings() {
        let mut t = Table::new(["x", "cdf"]);
        t.push(vec![json!("9/10"), json!("0")]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "x,cdf\n9/10,0\n");
    }
}
