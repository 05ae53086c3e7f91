//! Versioned report documents and their JSON / CSV writers.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "ym2d/1";

/// One computed number with its uncertainty.
#[derive(Debug, Clone, Serialize)]
pub struct Measurement {
    pub engine: String,
    pub quantity: String,
    pub params: BTreeMap<String, String>,
    pub value: f64,
    pub error_estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl Measurement {
    pub fn new(engine: &str, quantity: &str, value: f64, error_estimate: f64) -> Self {
        Self {
            engine: engine.into(),
            quantity: quantity.into(),
            params: BTreeMap::new(),
            value,
            error_estimate,
            exact: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    pub fn exact(mut self, rational: impl Into<String>) -> Self {
        self.exact = Some(rational.into());
        self
    }
}

/// Two engines compared against a tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub quantity: String,
    pub engines: [String; 2],
    pub values: [f64; 2],
    pub difference: f64,
    pub tolerance: f64,
    pub asserted: bool,
    pub passed: bool,
}

impl Comparison {
    /// `|a - b| <= tolerance`.
    pub fn within(quantity: &str, engines: [&str; 2], values: [f64; 2], tolerance: f64, asserted: bool) -> Self {
        let difference = (values[0] - values[1]).abs();
        Self {
            quantity: quantity.into(),
            engines: engines.map(Into::into),
            values,
            difference,
            tolerance,
            asserted,
            passed: difference <= tolerance,
        }
    }

    /// A boolean check reported in the same shape; `values` are informational.
    pub fn check(quantity: &str, engines: [&str; 2], values: [f64; 2], tolerance: f64, passed: bool) -> Self {
        Self {
            quantity: quantity.into(),
            engines: engines.map(Into::into),
            values,
            difference: (values[0] - values[1]).abs(),
            tolerance,
            asserted: true,
            passed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub measurements: Vec<Measurement>,
    pub comparisons: Vec<Comparison>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            schema: SCHEMA,
            command: command.into(),
            inputs: BTreeMap::new(),
            measurements: Vec::new(),
            comparisons: Vec::new(),
            details: Value::Null,
            passed: true,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.inputs.insert(key.into(), serde_json::to_value(value).expect("inputs serialize"));
        self
    }

    pub fn measure(&mut self, m: Measurement) -> &mut Self {
        self.measurements.push(m);
        self
    }

    pub fn compare(&mut self, c: Comparison) -> &mut Self {
        self.comparisons.push(c);
        self
    }

    pub fn details(&mut self, v: impl Serialize) -> &mut Self {
        self.details = serde_json::to_value(v).expect("details serialize");
        self
    }

    pub fn finish(mut self) -> Self {
        self.passed = self.comparisons.iter().all(|c| !c.asserted || c.passed);
        self
    }

    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut *out, self)?;
        writeln!(out)
    }

    /// One row per measurement: `engine, quantity, <params...>, value, error_estimate`.
    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut keys: Vec<&String> = self.measurements.iter().flat_map(|m| m.params.keys()).collect();
        keys.sort();
        keys.dedup();
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["engine", "quantity"];
        header.extend(keys.iter().map(|k| k.as_str()));
        header.extend(["value", "error_estimate"]);
        w.write_record(&header)?;
        for m in &self.measurements {
            let mut row = vec![m.engine.clone(), m.quantity.clone()];
            row.extend(keys.iter().map(|k| m.params.get(*k).cloned().unwrap_or_default()));
            row.push(format!("{:e}", m.value));
            row.push(format!("{:e}", m.error_estimate));
            w.write_record(&row)?;
        }
        w.flush()
    }
}
