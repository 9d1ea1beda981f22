use std::io::{self, Write};

use super::job::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Str(String),
    Int(u64),
    Float(f64),
    Bool(bool),
    Null,
}

pub type Row = Vec<(&'static str, Cell)>;

impl Cell {
    pub fn opt(v: Option<f64>) -> Cell {
        v.map_or(Cell::Null, Cell::Float)
    }

    /// Shortest text that reads back to the same binary64 value.
    pub fn to_text(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_finite() => serde_json::to_string(v).expect("finite float"),
            Cell::Float(v) if v.is_nan() => "nan".into(),
            Cell::Float(v) => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Bool(b) => b.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Str(s) => s.clone().into(),
            Cell::Int(v) => (*v).into(),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(serde_json::Value::Null, Into::into),
            Cell::Bool(b) => (*b).into(),
            Cell::Null => serde_json::Value::Null,
        }
    }
}

fn json_line(row: &Row) -> String {
    let fields: Vec<String> = row
        .iter()
        .map(|(k, v)| format!("{}:{}", serde_json::Value::from(*k), v.to_json()))
        .collect();
    format!("{{{}}}", fields.join(","))
}

pub fn emit<W: Write>(rows: &[Row], format: Format, out: &mut W) -> io::Result<()> {
    match format {
        Format::Json => {
            for row in rows {
                writeln!(out, "{}", json_line(row))?;
            }
        }
        Format::Plain => {
            for row in rows {
                let last = row.last().map(|(_, v)| v.to_text()).unwrap_or_default();
                writeln!(out, "{last}")?;
            }
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut *out);
            if let Some(first) = rows.first() {
                w.write_record(first.iter().map(|(k, _)| *k))?;
            }
            for row in rows {
                w.write_record(row.iter().map(|(_, v)| v.to_text()))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
