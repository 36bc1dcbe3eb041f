//! Structured verification reports.
//!
//! A report is an ordered list of named values plus an ordered list of
//! identity checks, each carrying the residual actually measured, the
//! tolerance it was held to, and a pass flag. Report-only quantities
//! (computed but not gated) carry `pass: None`.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckEntry {
    /// Which identity this checks, e.g. "omega Q = V + (2/3) sum I_k".
    pub name: String,
    /// Relative (or scaled) residual actually measured.
    pub residual: f64,
    /// Tolerance the residual was compared against.
    pub tolerance: f64,
    /// None for report-only quantities that are not asserted.
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub label: String,
    pub values: Vec<NamedValue>,
    pub checks: Vec<CheckEntry>,
}

impl FunctionalReport {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            values: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn push_value(&mut self, name: impl Into<String>, value: f64) {
        self.values.push(NamedValue {
            name: name.into(),
            value,
        });
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values
            .iter()
            .find(|nv| nv.name == name)
            .map(|nv| nv.value)
    }

    pub fn push_check(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.checks.push(CheckEntry {
            name: name.into(),
            residual,
            tolerance,
            pass: Some(residual.abs() <= tolerance),
        });
    }

    /// Computed and printed, never gated.
    pub fn push_report_only(&mut self, name: impl Into<String>, residual: f64) {
        self.checks.push(CheckEntry {
            name: name.into(),
            residual,
            tolerance: f64::INFINITY,
            pass: None,
        });
    }

    pub fn check(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass.unwrap_or(true))
    }

    pub fn failing(&self) -> Vec<&CheckEntry> {
        self.checks
            .iter()
            .filter(|c| c.pass == Some(false))
            .collect()
    }

    pub fn merge(&mut self, other: FunctionalReport) {
        self.values.extend(other.values);
        self.checks.extend(other.checks);
    }

    /// Key-value text rendering.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[{}]", self.label);
        for nv in &self.values {
            let _ = writeln!(s, "{} = {:.17e}", nv.name, nv.value);
        }
        for c in &self.checks {
            match c.pass {
                Some(p) => {
                    let _ = writeln!(
                        s,
                        "check \"{}\": residual = {:.6e}, tol = {:.1e} -> {}",
                        c.name,
                        c.residual,
                        c.tolerance,
                        if p { "pass" } else { "FAIL" }
                    );
                }
                None => {
                    let _ = writeln!(
                        s,
                        "report \"{}\": value = {:.6e} (not asserted)",
                        c.name, c.residual
                    );
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_fail_logic() {
        let mut r = FunctionalReport::new("demo");
        r.push_value("Q", 1.5);
        r.push_check("a", 1e-7, 1e-5);
        assert!(r.all_pass());
        r.push_check("b", 1e-3, 1e-5);
        assert!(!r.all_pass());
        assert_eq!(r.failing().len(), 1);
        r.push_report_only("c", 42.0);
        assert_eq!(r.failing().len(), 1);
        assert_eq!(r.get("Q"), Some(1.5));
    }

    #[test]
    fn json_round_trip() {
        let mut r = FunctionalReport::new("demo");
        r.push_value("E0", 2.25);
        r.push_check("ident", 3e-9, 1e-6);
        let back: FunctionalReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back.label, "demo");
        assert_eq!(back.values[0].value, 2.25);
        assert_eq!(back.checks[0].pass, Some(true));
    }
}
