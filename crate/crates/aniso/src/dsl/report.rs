//! Derivation reports in human and machine (JSON) form.

use std::fmt;

use aniso_core::psolver::ParamSet;
use aniso_core::{Check, Decision};
use serde::Serialize;

/// Version tag of the JSON layout; golden files pin it.
pub const SCHEMA: &str = "aniso-report/1";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceLine {
    pub label: String,
    pub anchor: String,
    pub status: String,
    pub detail: String,
}

impl From<&Check> for TraceLine {
    fn from(c: &Check) -> Self {
        TraceLine { label: c.label.clone(), anchor: c.anchor.into(), status: c.status.to_string(), detail: c.detail.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Excluded {
    pub p: String,
    pub reason: String,
}

/// Verdict on one cell (open interval or breakpoint) of the `p`-axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub p: String,
    pub sample: String,
    pub verdict: String,
    /// First failed condition, or the covering rule.
    pub label: String,
    pub anchor: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamsReport {
    pub set: String,
    pub intervals: Vec<String>,
    pub excluded: Vec<Excluded>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<Cell>,
}

impl From<&ParamSet> for ParamsReport {
    fn from(s: &ParamSet) -> Self {
        let excluded = s
            .excluded_points
            .iter()
            .map(|(x, why)| Excluded { p: x.recip().map(|p| p.to_string()).unwrap_or_else(|| "inf".into()), reason: why.clone() })
            .collect();
        ParamsReport { set: s.to_string(), intervals: s.p_intervals(), excluded, cells: Vec::new() }
    }
}

/// One nonlinear term of an application check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermLine {
    pub group: String,
    pub term: String,
    pub facts: Vec<String>,
    pub condition: String,
    pub expected: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solved: Option<ParamsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed: Option<TraceLine>,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
    pub anchor: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub query: String,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at_p: Option<String>,
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed: Option<TraceLine>,
    pub trace: Vec<TraceLine>,
    pub params: Option<ParamsReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermLine>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_us: Option<u64>,
}

impl Report {
    pub fn new(query: String, kind: &'static str) -> Self {
        Report {
            schema: SCHEMA,
            query,
            kind,
            at_p: None,
            verdict: None,
            value: None,
            failed: None,
            trace: Vec::new(),
            params: None,
            terms: None,
            error: None,
            timing_us: None,
        }
    }

    pub fn with_decision(mut self, d: &Decision) -> Self {
        self.verdict = Some(d.verdict.to_string());
        self.failed = d.first_failure().map(TraceLine::from);
        self.trace = d.trace.iter().map(TraceLine::from).collect();
        self
    }

    pub fn with_error(mut self, e: &aniso_core::Error) -> Self {
        self.error = Some(ErrorReport { kind: e.kind().into(), message: e.to_string(), anchor: e.anchor().into() });
        self
    }

    pub fn push(&mut self, label: &str, anchor: &str, status: &str, detail: String) {
        self.trace.push(TraceLine { label: label.into(), anchor: anchor.into(), status: status.into(), detail });
    }

    /// 0 on success or COVERED, 1 on NOT_COVERED, 3 on an engine error.
    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            3
        } else if self.verdict.as_deref() == Some("NOT_COVERED") {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn inline(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Object(map) => {
            let parts: Vec<String> = map.iter().map(|(k, v)| format!("{}: {}", k, inline(v))).collect();
            format!("{{{}}}", parts.join(", "))
        }
        serde_json::Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

fn render_value(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Object(map) => map.iter().map(|(k, v)| format!("\n  {}: {}", k, inline(v))).collect(),
        other => format!(" {}", inline(other)),
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "query: {}", self.query)?;
        if let Some(v) = &self.verdict {
            writeln!(f, "verdict: {}", v)?;
        }
        if let Some(c) = &self.failed {
            writeln!(f, "failed: {} ({})", c.label, c.anchor)?;
        }
        if let Some(v) = &self.value {
            writeln!(f, "value:{}", render_value(v))?;
        }
        for t in &self.trace {
            writeln!(f, "  [{}] {}: {} ({})", t.status, t.label, t.detail, t.anchor)?;
        }
        if let Some(p) = &self.params {
            writeln!(f, "params: {}", p.set)?;
            for c in &p.cells {
                writeln!(f, "  p {} [at p = {}]: {} via {} ({})", c.p, c.sample, c.verdict, c.label, c.anchor)?;
            }
        }
        for t in self.terms.iter().flatten() {
            let got = match (&t.solved, &t.verdict) {
                (Some(s), _) => s.set.clone(),
                (None, Some(v)) => v.clone(),
                (None, None) => "-".into(),
            };
            writeln!(f, "  {} | {}: {} [{} expects {}]{}", t.group, t.term, got, t.condition, t.expected, if t.agrees { "" } else { " MISMATCH" })?;
            if let Some(c) = &t.failed {
                writeln!(f, "      failed: {} ({})", c.label, c.anchor)?;
            }
        }
        if let Some(e) = &self.error {
            writeln!(f, "error: {}: {} ({})", e.kind, e.message, e.anchor)?;
        }
        if let Some(t) = self.timing_us {
            writeln!(f, "time: {} us", t)?;
        }
        Ok(())
    }
}
