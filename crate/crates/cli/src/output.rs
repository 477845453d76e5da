use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::cli::Format;
use crate::settings::CliError;

#[derive(Clone, Debug)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => num(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Num(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

/// Shortest round-trip form, switching to exponent notation for very small
/// or very large magnitudes.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// What a subcommand produced: the table, extra JSON fields, the one-line
/// summary, and a tolerance failure if any check missed.
pub struct Outcome {
    pub table: Table,
    pub parameters: Map<String, Value>,
    pub extra: Map<String, Value>,
    pub summary: String,
    pub failure: Option<String>,
}

fn write_csv<W: Write>(table: &Table, w: W) -> Result<(), CliError> {
    let mut wr = csv::Writer::from_writer(w);
    let io = |e: csv::Error| CliError::Io(e.to_string());
    wr.write_record(&table.columns).map_err(io)?;
    for row in &table.rows {
        wr.write_record(row.iter().map(Cell::csv)).map_err(io)?;
    }
    wr.flush()?;
    Ok(())
}

fn write_json<W: Write>(command: &str, out: &Outcome, mut w: W) -> Result<(), CliError> {
    let rows: Vec<Value> = out
        .table
        .rows
        .iter()
        .map(|r| {
            let m: Map<String, Value> = out.table.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect();
            Value::Object(m)
        })
        .collect();
    let mut doc = Map::new();
    doc.insert("command".into(), command.into());
    doc.insert("parameters".into(), Value::Object(out.parameters.clone()));
    doc.insert("rows".into(), Value::Array(rows));
    for (k, v) in &out.extra {
        doc.insert(k.clone(), v.clone());
    }
    doc.insert("summary".into(), out.summary.clone().into());
    doc.insert("passed".into(), out.failure.is_none().into());
    serde_json::to_writer_pretty(&mut w, &Value::Object(doc)).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

/// Writes the table to `path` or stdout. The summary goes to stdout when the
/// table went to a file, otherwise to stderr so piped output stays clean.
pub fn emit(command: &str, out: &Outcome, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let write = |w: &mut dyn Write| match format {
        Format::Csv => write_csv(&out.table, w),
        Format::Json => write_json(command, out, w),
    };
    match path {
        Some(p) => {
            let f = std::fs::File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            let mut b = std::io::BufWriter::new(f);
            write(&mut b)?;
            b.flush()?;
            println!("{}", out.summary);
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush()?;
            eprintln!("{}", out.summary);
        }
    }
    Ok(())
}
