//! Machine-readable reports and their JSON, CSV, and table renderings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::graph::Graph;
use crate::scenario::AnyAllocation;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValueEntry {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub decimal: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AllocationEntry {
    pub node: String,
    #[serde(flatten)]
    pub value: ValueEntry,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
    Info,
}

impl Status {
    pub fn from_bool(passed: bool) -> Self {
        if passed {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
            Status::Info => "info",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

impl CheckEntry {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        CheckEntry {
            name: name.into(),
            status,
            detail: detail.into(),
            witnesses: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub method: String,
    pub domain: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub allocations: Vec<AllocationEntry>,
    pub total: ValueEntry,
    pub checks: Vec<CheckEntry>,
    /// Wall-clock time; only filled when timing is requested so that default
    /// output stays byte-identical across runs.
    pub elapsed_ms: Option<f64>,
}

pub fn entries(graph: &Graph, allocation: &AnyAllocation) -> Vec<AllocationEntry> {
    let exact = allocation.exact_strings();
    allocation
        .to_f64()
        .into_iter()
        .enumerate()
        .map(|(i, decimal)| AllocationEntry {
            node: graph.label(i).to_string(),
            value: ValueEntry {
                exact: exact.as_ref().map(|e| e[i].clone()),
                decimal,
            },
        })
        .collect()
}

pub fn total_entry(allocation: &AnyAllocation) -> ValueEntry {
    ValueEntry {
        exact: allocation.exact_strings().map(|_| allocation.total_string()),
        decimal: allocation.total_f64(),
    }
}

/// `%g`-style rendering with six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..6).contains(&magnitude) {
        let s = format!("{x:.5e}");
        let (mantissa, exp) = s.split_once('e').expect("exponent form");
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (5 - magnitude).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}"))
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// The value a CSV row carries: the exact string when present.
pub fn csv_value(v: &ValueEntry) -> String {
    v.exact.clone().unwrap_or_else(|| v.decimal.to_string())
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("node,value\n");
        for e in &self.allocations {
            let _ = writeln!(s, "{},{}", e.node, csv_value(&e.value));
        }
        s
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario: {}", self.scenario);
        let _ = write!(s, "method:   {} ({})", self.method, self.domain);
        if let (Some(n), Some(seed)) = (self.samples, self.seed) {
            let _ = write!(s, ", {n} samples, seed {seed}");
        }
        s.push('\n');
        let width = self.allocations.iter().map(|e| e.node.len()).max().unwrap_or(4).max(5);
        let _ = writeln!(s, "{:<width$}  {:>12}  exact", "node", "value");
        let mut row = |label: &str, v: &ValueEntry| {
            let _ = writeln!(
                s,
                "{label:<width$}  {:>12}  {}",
                sig6(v.decimal),
                v.exact.as_deref().unwrap_or("-")
            );
        };
        for e in &self.allocations {
            row(&e.node, &e.value);
        }
        row("total", &self.total);
        render_checks(&mut s, &self.checks);
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "elapsed:  {ms:.3} ms");
        }
        s
    }
}

pub fn render_checks(s: &mut String, checks: &[CheckEntry]) {
    if checks.is_empty() {
        return;
    }
    s.push_str("checks:\n");
    for c in checks {
        let _ = writeln!(s, "  [{}] {}: {}", c.status.tag(), c.name, c.detail);
        for w in &c.witnesses {
            let _ = writeln!(s, "         {w}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(5.0 / 3.0), "1.66667");
        assert_eq!(sig6(9.0), "9");
        assert_eq!(sig6(3.4926), "3.4926");
        assert_eq!(sig6(21.90812345), "21.9081");
        assert_eq!(sig6(-0.05), "-0.05");
        assert_eq!(sig6(1234567.0), "1.23457e6");
        assert_eq!(sig6(0.0), "0");
    }
}
