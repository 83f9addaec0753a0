//! Tables with a provenance header, written as CSV or JSON.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i32> for Cell {
    fn from(x: i32) -> Self {
        Cell::Int(x as i64)
    }
}

/// Shortest round-trip text, switching to exponent form for very small or large values.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 || (1e-4..1e15).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => fmt_float(*x),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Float(x) => json!(x),
            Cell::Empty => Value::Null,
        }
    }
}

/// One numerical check: |value − reference| against a tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub reference: f64,
    pub deviation: f64,
    pub tol: f64,
}

impl Check {
    pub fn absolute(name: impl Into<String>, value: f64, reference: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value,
            reference,
            deviation: (value - reference).abs(),
            tol,
        }
    }

    /// Deviation measured relative to |reference|.
    pub fn relative(name: impl Into<String>, value: f64, reference: f64, tol: f64) -> Self {
        Self {
            deviation: (value - reference).abs() / reference.abs().max(f64::MIN_POSITIVE),
            ..Self::absolute(name, value, reference, tol)
        }
    }

    pub fn passed(&self) -> bool {
        self.deviation.is_finite() && self.deviation <= self.tol
    }

    pub fn line(&self) -> String {
        format!(
            "{} {}: value {} reference {} deviation {} tol {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            fmt_float(self.value),
            fmt_float(self.reference),
            fmt_float(self.deviation),
            fmt_float(self.tol)
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub checks: Vec<Check>,
    pub tolerances: Vec<(&'static str, f64)>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        match cfg.format {
            Format::Csv => self.csv(cfg),
            Format::Json => serde_json::to_string_pretty(&self.json(cfg)).expect("JSON values are serialisable") + "\n",
        }
    }

    fn csv(&self, cfg: &RunConfig) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# stagger {} (stagger-core {})", env!("CARGO_PKG_VERSION"), stagger_core::VERSION);
        let _ = writeln!(s, "# command: {}", cfg.command);
        for (k, v) in &cfg.raw {
            let _ = writeln!(s, "# {k} = {v}");
        }
        let _ = writeln!(s, "# gamma_resolved = {}", fmt_float(cfg.params.gamma));
        let _ = writeln!(s, "# t_resolved = {}", fmt_float(cfg.params.t));
        for (k, v) in &self.tolerances {
            let _ = writeln!(s, "# tolerance {k} = {}", fmt_float(*v));
        }
        for n in &self.notes {
            let _ = writeln!(s, "# note: {n}");
        }
        for c in &self.checks {
            let _ = writeln!(s, "# {}", c.line());
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(s, "{}", row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
        }
        s
    }

    fn json(&self, cfg: &RunConfig) -> Value {
        let params: Map<String, Value> = cfg.raw.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let tols: Map<String, Value> = self.tolerances.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        json!({
            "metadata": {
                "tool": "stagger",
                "version": env!("CARGO_PKG_VERSION"),
                "core_version": stagger_core::VERSION,
                "command": cfg.command.to_string(),
                "parameters": params,
                "gamma_resolved": cfg.params.gamma,
                "t_resolved": cfg.params.t,
                "tolerances": tols,
                "notes": self.notes,
            },
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "value": c.value,
                "reference": c.reference,
                "deviation": c.deviation,
                "tol": c.tol,
                "passed": c.passed(),
            })).collect::<Vec<_>>(),
        })
    }
}
