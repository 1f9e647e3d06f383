//! Machine-readable verification reports.

use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Indeterminate => "indeterminate",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Computed data reported alongside the status (e.g. a relation table entry).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Check { name: name.into(), status, witness: None, value: None, h_order: None, degree: None }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn with_value(mut self, v: impl Into<String>) -> Self {
        self.value = Some(v.into());
        self
    }

    pub fn at_order(mut self, k: usize) -> Self {
        self.h_order = Some(k);
        self
    }

    pub fn at_degree(mut self, d: usize) -> Self {
        self.degree = Some(d);
        self
    }
}

/// A list of named checks; the overall verdict is the worst status.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.push(Check::new(name, Status::Pass));
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.push(Check::new(name, Status::Fail).with_witness(witness));
    }

    pub fn indeterminate(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.push(Check::new(name, Status::Indeterminate).with_witness(reason));
    }

    /// Record pass, or fail with the first witness.
    pub fn record(&mut self, name: impl Into<String>, first_violation: Option<String>) {
        match first_violation {
            None => self.pass(name),
            Some(w) => self.fail(name, w),
        }
    }

    /// Record the outcome of a fallible computation; errors become indeterminate.
    pub fn record_result(&mut self, name: impl Into<String>, r: crate::Result<Option<String>>) {
        match r {
            Ok(v) => self.record(name, v),
            Err(e) => self.indeterminate(name, e.to_string()),
        }
    }

    /// Append another report, prefixing its check names.
    pub fn merge(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.name = format!("{}.{}", prefix, c.name);
            }
            self.checks.push(c);
        }
    }

    pub fn verdict(&self) -> Status {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if self.checks.iter().any(|c| c.status == Status::Indeterminate) {
            Status::Indeterminate
        } else {
            Status::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Status::Pass
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Failing or indeterminate checks, for diagnostics.
    pub fn problems(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.status != Status::Pass).collect()
    }

    /// Numbers of passing, failing and indeterminate checks.
    pub fn counts(&self) -> (usize, usize, usize) {
        let n = |s| self.checks.iter().filter(|c| c.status == s).count();
        (n(Status::Pass), n(Status::Fail), n(Status::Indeterminate))
    }

    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{:<14} {}", c.status.to_string(), c.name)?;
            if let Some(v) = &c.value {
                write!(f, " = {}", v)?;
            }
            if let Some(w) = &c.witness {
                write!(f, "  [{}]", w)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
