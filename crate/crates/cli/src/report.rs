use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

/// One verified claim.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// A table for `--format csv`.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: vec![],
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// What a subcommand produced.
pub struct Outcome {
    pub checks: Vec<Check>,
    pub result: Value,
    pub table: Option<Table>,
}

impl Outcome {
    pub fn new(result: impl Serialize) -> Self {
        Outcome {
            checks: vec![],
            result: serde_json::to_value(result).expect("serializable"),
            table: None,
        }
    }

    pub fn check(
        mut self,
        name: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) -> Self {
        self.checks.push(Check::new(name, passed, detail));
        self
    }

    pub fn table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }
}

#[derive(Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub inputs: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub result: Value,
}

impl RunReport {
    pub fn new(subcommand: &str, inputs: Value, outcome: &Outcome) -> Self {
        RunReport {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.into(),
            inputs,
            passed: outcome.checks.iter().all(|c| c.passed),
            checks: outcome.checks.clone(),
            result: outcome.result.clone(),
        }
    }

    /// Pretty JSON; keys come out sorted because `Value` maps are ordered.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("serializable");
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}", self.tool, self.subcommand).unwrap();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{tag} {}: {}", c.name, c.detail).unwrap();
        }
        writeln!(
            out,
            "overall: {}",
            if self.passed { "pass" } else { "fail" }
        )
        .unwrap();
        out
    }
}

pub fn to_csv(outcome: &Outcome) -> String {
    let table = outcome.table.clone().unwrap_or_else(|| {
        let mut t = Table::new(&["check", "passed", "detail"]);
        for c in &outcome.checks {
            t.push(vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]);
        }
        t
    });
    let mut out = String::new();
    writeln!(
        out,
        "{}",
        table
            .header
            .iter()
            .map(|h| csv_field(h))
            .collect::<Vec<_>>()
            .join(",")
    )
    .unwrap();
    for row in &table.rows {
        writeln!(
            out,
            "{}",
            row.iter()
                .map(|h| csv_field(h))
                .collect::<Vec<_>>()
                .join(",")
        )
        .unwrap();
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
