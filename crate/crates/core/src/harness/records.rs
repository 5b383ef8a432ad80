//! Flat records shared by the JSONL and CSV writers.
//!
//! Numbers are written with 17 significant digits (`{:.16e}`) so that both
//! formats round-trip bit for bit. Non-finite numbers are written as the
//! strings `"inf"`, `"-inf"` and `"NaN"`. Array-valued CSV cells hold the
//! same JSON text as the JSONL field.

use std::io::{BufRead, Read, Write};

use serde_json::Value;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::harness::config::Format;
use crate::metric::Point;

pub const COLUMNS: [&str; 14] = [
    "kind",
    "scenario",
    "seed",
    "index",
    "points",
    "step_norm",
    "bound_check",
    "verdict",
    "lhs",
    "rhs",
    "values",
    "residual",
    "rate",
    "detail",
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Record {
    pub kind: String,
    pub scenario: String,
    pub seed: Option<u64>,
    pub index: Option<u64>,
    pub points: Option<Vec<Vec<f64>>>,
    pub step_norm: Option<f64>,
    pub bound_check: Option<String>,
    pub verdict: Option<String>,
    pub lhs: Option<Vec<f64>>,
    pub rhs: Option<Vec<f64>>,
    pub values: Option<Vec<f64>>,
    pub residual: Option<f64>,
    pub rate: Option<f64>,
    pub detail: Option<String>,
}

/// Diagonal entries in order, otherwise the spectrum (or the raw
/// re/im components when the element is not Hermitian).
pub fn element_values(e: &AlgebraElement) -> Vec<f64> {
    match e.diagonal_entries() {
        Some(d) => d.to_vec(),
        None => e.spectrum().unwrap_or_else(|_| e.components()),
    }
}

pub fn point_values(points: &[&Point]) -> Vec<Vec<f64>> {
    points.iter().map(|p| p.coordinates()).collect()
}

impl Record {
    pub fn new(kind: &str, scenario: &str) -> Self {
        Self {
            kind: kind.to_string(),
            scenario: scenario.to_string(),
            ..Default::default()
        }
    }

    /// JSON text of every column, `None` for absent fields.
    fn cells(&self) -> [Option<String>; 14] {
        let text = |s: &Option<String>| s.as_ref().map(|s| json_string(s));
        [
            Some(json_string(&self.kind)),
            Some(json_string(&self.scenario)),
            self.seed.map(|v| v.to_string()),
            self.index.map(|v| v.to_string()),
            self.points.as_ref().map(|p| {
                let rows: Vec<String> = p.iter().map(|r| number_array(r)).collect();
                format!("[{}]", rows.join(","))
            }),
            self.step_norm.map(number),
            text(&self.bound_check),
            text(&self.verdict),
            self.lhs.as_deref().map(number_array),
            self.rhs.as_deref().map(number_array),
            self.values.as_deref().map(number_array),
            self.residual.map(number),
            self.rate.map(number),
            text(&self.detail),
        ]
    }

    pub fn to_json_line(&self) -> String {
        let fields: Vec<String> = COLUMNS
            .iter()
            .zip(self.cells())
            .map(|(name, cell)| format!("\"{name}\":{}", cell.as_deref().unwrap_or("null")))
            .collect();
        format!("{{{}}}", fields.join(","))
    }

    /// CSV cells: strings unquoted, everything else as its JSON text, absent
    /// fields empty.
    fn csv_cells(&self) -> Vec<String> {
        let strings = [0usize, 1, 6, 7, 13];
        let raw = [
            Some(self.kind.clone()),
            Some(self.scenario.clone()),
            None,
            None,
            None,
            None,
            self.bound_check.clone(),
            self.verdict.clone(),
            None,
            None,
            None,
            None,
            None,
            self.detail.clone(),
        ];
        self.cells()
            .into_iter()
            .enumerate()
            .map(|(i, cell)| {
                if strings.contains(&i) {
                    raw[i].clone().unwrap_or_default()
                } else {
                    cell.unwrap_or_default()
                }
            })
            .collect()
    }

    fn from_fields(get: impl Fn(usize) -> Option<Value>) -> Result<Self> {
        let bad = |col: usize| Error::Config(format!("malformed record field '{}'", COLUMNS[col]));
        let string = |col: usize| -> Result<Option<String>> {
            match get(col) {
                None | Some(Value::Null) => Ok(None),
                Some(Value::String(s)) => Ok(Some(s)),
                Some(_) => Err(bad(col)),
            }
        };
        let integer = |col: usize| -> Result<Option<u64>> {
            match get(col) {
                None | Some(Value::Null) => Ok(None),
                Some(v) => v.as_u64().map(Some).ok_or_else(|| bad(col)),
            }
        };
        let scalar = |col: usize| -> Result<Option<f64>> {
            match get(col) {
                None | Some(Value::Null) => Ok(None),
                Some(v) => decode_number(&v).map(Some).ok_or_else(|| bad(col)),
            }
        };
        let array = |v: &Value| -> Option<Vec<f64>> { v.as_array()?.iter().map(decode_number).collect() };
        let vector = |col: usize| -> Result<Option<Vec<f64>>> {
            match get(col) {
                None | Some(Value::Null) => Ok(None),
                Some(v) => array(&v).map(Some).ok_or_else(|| bad(col)),
            }
        };
        let points = match get(4) {
            None | Some(Value::Null) => None,
            Some(Value::Array(rows)) => Some(rows.iter().map(array).collect::<Option<Vec<_>>>().ok_or_else(|| bad(4))?),
            Some(_) => return Err(bad(4)),
        };
        Ok(Self {
            kind: string(0)?.ok_or_else(|| bad(0))?,
            scenario: string(1)?.unwrap_or_default(),
            seed: integer(2)?,
            index: integer(3)?,
            points,
            step_norm: scalar(5)?,
            bound_check: string(6)?,
            verdict: string(7)?,
            lhs: vector(8)?,
            rhs: vector(9)?,
            values: vector(10)?,
            residual: scalar(11)?,
            rate: scalar(12)?,
            detail: string(13)?,
        })
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn number(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "\"NaN\"".into()
    } else if x > 0.0 {
        "\"inf\"".into()
    } else {
        "\"-inf\"".into()
    }
}

fn number_array(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|&x| number(x)).collect();
    format!("[{}]", parts.join(","))
}

fn decode_number(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

enum Inner {
    Jsonl(Box<dyn Write>),
    Csv(csv::Writer<Box<dyn Write>>),
}

/// Writes records in order; the CSV header is written up front.
pub struct RecordWriter {
    inner: Inner,
}

impl RecordWriter {
    pub fn new(writer: Box<dyn Write>, format: Format) -> Result<Self> {
        let inner = match format {
            Format::Jsonl => Inner::Jsonl(writer),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(writer);
                w.write_record(COLUMNS).map_err(csv_error)?;
                Inner::Csv(w)
            }
        };
        Ok(Self { inner })
    }

    pub fn write(&mut self, record: &Record) -> Result<()> {
        match &mut self.inner {
            Inner::Jsonl(w) => writeln!(w, "{}", record.to_json_line())?,
            Inner::Csv(w) => w.write_record(record.csv_cells()).map_err(csv_error)?,
        }
        Ok(())
    }

    pub fn finish(self) -> Result<()> {
        match self.inner {
            Inner::Jsonl(mut w) => w.flush()?,
            Inner::Csv(mut w) => w.flush()?,
        }
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Config(format!("csv: {other:?}")),
    }
}

pub fn read_jsonl(reader: impl BufRead) -> Result<Vec<Record>> {
    let mut records = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let object: serde_json::Map<String, Value> =
            serde_json::from_str(&line).map_err(|e| Error::Config(format!("jsonl: {e}")))?;
        records.push(Record::from_fields(|col| object.get(COLUMNS[col]).cloned())?);
    }
    Ok(records)
}

pub fn read_csv(reader: impl Read) -> Result<Vec<Record>> {
    let mut csv = csv::Reader::from_reader(reader);
    let header = csv.headers().map_err(csv_error)?.clone();
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(Error::Config("csv header does not match the record columns".into()));
    }
    let strings = [0usize, 1, 6, 7, 13];
    let mut records = Vec::new();
    for row in csv.records() {
        let row = row.map_err(csv_error)?;
        let record = Record::from_fields(|col| {
            let cell = row.get(col)?;
            if cell.is_empty() {
                None
            } else if strings.contains(&col) {
                Some(Value::String(cell.to_string()))
            } else {
                serde_json::from_str(cell).ok()
            }
        })?;
        records.push(record);
    }
    Ok(records)
}
