//! Pass/fail reports shared by the axiom, Frobenius and category checks.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Counterexample on failure, or a summary (cases checked, measured scalar) on success.
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub subject: String,
    pub exhaustive: bool,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new(subject: impl Into<String>, exhaustive: bool) -> Self {
        CheckReport { subject: subject.into(), exhaustive, checks: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, pass: bool, witness: Value) {
        self.checks.push(Check { name: name.into(), pass, witness });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}
