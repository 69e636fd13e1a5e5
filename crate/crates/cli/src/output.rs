//! Tabular output shared by every command: one header, typed cells, and two
//! renderings (RFC 4180 CSV with LF endings, or a single JSON document).

use qwell_core::physconst::to_ev;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Field {
    pub fn opt(x: Option<f64>) -> Field {
        x.map_or(Field::Empty, Field::Num)
    }

    fn csv(&self) -> String {
        match self {
            Field::Num(x) if x.is_finite() => fmt_num(*x),
            Field::Num(_) | Field::Empty => String::new(),
            Field::Int(n) => n.to_string(),
            Field::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // serde_json turns non-finite floats into null, never NaN.
            Field::Num(x) => Value::from(*x),
            Field::Int(n) => Value::from(*n),
            Field::Text(s) => Value::from(s.as_str()),
            Field::Empty => Value::Null,
        }
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Field {
        Field::Text(s.to_string())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Field {
        Field::Text(s)
    }
}

impl From<f64> for Field {
    fn from(x: f64) -> Field {
        Field::Num(x)
    }
}

impl From<usize> for Field {
    fn from(n: usize) -> Field {
        Field::Int(n as u64)
    }
}

/// Shortest round-trip text, in exponent form outside [1e-4, 1e15).
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Table {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> anyhow::Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Field::csv))?;
        }
        Ok(w.into_inner().map_err(|e| e.into_error())?)
    }

    /// Rows as JSON objects keyed by header.
    pub fn records(&self) -> Vec<Value> {
        self.rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .headers
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Field::json))
                    .collect();
                Value::Object(obj)
            })
            .collect()
    }
}

pub fn json_bytes(v: &Value) -> anyhow::Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(v)?;
    out.push(b'\n');
    Ok(out)
}

/// Display unit for energies, chosen from the largest magnitude shown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyUnit {
    MicroEv,
    MilliEv,
}

impl EnergyUnit {
    /// meV from 1 meV upward, µeV below. Input in joules.
    pub fn for_magnitude(joules: f64) -> EnergyUnit {
        if to_ev(joules.abs()) >= 1e-3 {
            EnergyUnit::MilliEv
        } else {
            EnergyUnit::MicroEv
        }
    }

    pub fn pick(values: impl IntoIterator<Item = f64>) -> EnergyUnit {
        let m = values
            .into_iter()
            .filter(|v| v.is_finite())
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        EnergyUnit::for_magnitude(m)
    }

    /// Header suffix, ASCII only.
    pub fn suffix(&self) -> &'static str {
        match self {
            EnergyUnit::MicroEv => "ueV",
            EnergyUnit::MilliEv => "meV",
        }
    }

    pub fn from_joules(&self, joules: f64) -> f64 {
        let ev = to_ev(joules);
        match self {
            EnergyUnit::MicroEv => ev * 1e6,
            EnergyUnit::MilliEv => ev * 1e3,
        }
    }
}
