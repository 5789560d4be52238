//! Homogeneous result tables and their CSV/JSON encodings.

use std::io::Write;

use num_complex::Complex64;
use serde_json::{Map, Number, Value};

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Int,
    Real,
    Complex,
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Complex(Complex64),
    Text(String),
    /// Written as an empty field (CSV) or `null` (JSON).
    Missing,
}

impl Cell {
    fn is_finite(&self) -> bool {
        match self {
            Cell::Real(x) => x.is_finite(),
            Cell::Complex(z) => z.re.is_finite() && z.im.is_finite(),
            _ => true,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<Complex64> for Cell {
    fn from(z: Complex64) -> Self {
        Cell::Complex(z)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Real)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<(String, ColumnKind)>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<'a>(columns: impl IntoIterator<Item = (&'a str, ColumnKind)>) -> Self {
        Table {
            columns: columns.into_iter().map(|(n, k)| (n.to_string(), k)).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn header(&self) -> Vec<String> {
        self.columns
            .iter()
            .flat_map(|(name, kind)| match kind {
                ColumnKind::Complex => vec![format!("{name}_re"), format!("{name}_im")],
                _ => vec![name.clone()],
            })
            .collect()
    }

    fn check_finite(&self) -> Result<(), CliError> {
        for (r, row) in self.rows.iter().enumerate() {
            for (cell, (name, _)) in row.iter().zip(&self.columns) {
                if !cell.is_finite() {
                    return Err(CliError::Numerical(format!("non-finite value in column {name} of row {r}")));
                }
            }
        }
        Ok(())
    }

    /// Nothing is written unless every value is finite.
    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        self.check_finite()?;
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        w.write_record(self.header())?;
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .flat_map(|c| match c {
                    Cell::Int(i) => vec![i.to_string()],
                    Cell::Real(x) => vec![fmt_real(*x)],
                    Cell::Complex(z) => vec![fmt_real(z.re), fmt_real(z.im)],
                    Cell::Text(s) => vec![s.clone()],
                    Cell::Missing => vec![String::new()],
                })
                .collect();
            w.write_record(fields)?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|((name, _), cell)| (name.clone(), json_cell(cell)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        serde_json::to_writer_pretty(&mut *out, &rows).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(out)?;
        Ok(())
    }
}

/// 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn json_real(x: f64) -> Value {
    // finiteness is checked before any output
    Value::Number(Number::from_f64(x).expect("finite"))
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::Int(i) => Value::from(*i),
        Cell::Real(x) => json_real(*x),
        Cell::Complex(z) => {
            let mut m = Map::new();
            m.insert("re".into(), json_real(z.re));
            m.insert("im".into(), json_real(z.im));
            Value::Object(m)
        }
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Missing => Value::Null,
    }
}
