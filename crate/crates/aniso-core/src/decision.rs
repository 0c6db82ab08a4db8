//! Verdicts with an ordered trace of checked conditions.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Covered,
    NotCovered,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Covered => "COVERED",
            Verdict::NotCovered => "NOT_COVERED",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::NotApplicable => "NOT_APPLICABLE",
        })
    }
}

/// One checked condition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Check {
    pub label: String,
    pub anchor: &'static str,
    pub status: Status,
    pub detail: String,
}

/// Outcome of a decision procedure. `verdict` is `Covered` iff no check failed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decision {
    pub verdict: Verdict,
    pub trace: Vec<Check>,
}

impl Decision {
    pub fn from_trace(trace: Vec<Check>) -> Self {
        assert!(!trace.is_empty(), "decision trace must not be empty");
        let verdict = if trace.iter().any(|c| c.status == Status::Fail) { Verdict::NotCovered } else { Verdict::Covered };
        Decision { verdict, trace }
    }

    pub fn is_covered(&self) -> bool {
        self.verdict == Verdict::Covered
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.trace.iter().find(|c| c.status == Status::Fail)
    }

    pub fn find(&self, label: &str) -> Option<&Check> {
        self.trace.iter().find(|c| c.label == label)
    }
}

/// Accumulates checks in order.
#[derive(Default, Debug)]
pub struct Trace {
    pub checks: Vec<Check>,
}

impl Trace {
    pub fn new() -> Self {
        Trace::default()
    }

    /// Records a condition; returns its truth value.
    pub fn check(&mut self, label: &str, anchor: &'static str, ok: bool, detail: String) -> bool {
        self.checks.push(Check {
            label: label.into(),
            anchor,
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        });
        ok
    }

    pub fn skip(&mut self, label: &str, anchor: &'static str, detail: String) {
        self.checks.push(Check { label: label.into(), anchor, status: Status::NotApplicable, detail });
    }

    pub fn extend(&mut self, other: Vec<Check>) {
        self.checks.extend(other);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn finish(self) -> Decision {
        Decision::from_trace(self.checks)
    }
}
