//! Outcome of an equation check with witness instantiations.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// At most this many witnesses are kept per equation.
pub const MAX_WITNESSES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub equation: String,
    pub instance: BTreeMap<String, String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationResult {
    pub name: String,
    pub text: String,
    pub instances: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquationReport {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    pub verdict: Verdict,
    pub equations: Vec<EquationResult>,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl EquationReport {
    pub fn new(check: &str) -> Self {
        EquationReport {
            check: check.to_string(),
            k: None,
            mode: None,
            verdict: Verdict::Pass,
            equations: Vec::new(),
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Starts a new equation; instances are recorded with [`Self::record`].
    pub fn begin(&mut self, name: &str, text: &str) {
        self.equations.push(EquationResult {
            name: name.to_string(),
            text: text.to_string(),
            instances: 0,
            failures: 0,
        });
    }

    /// Records one instance of the current equation.
    pub fn record(&mut self, instance: &[(&str, &str)], lhs: &str, rhs: &str) {
        let eq = self.equations.last_mut().expect("begin before record");
        eq.instances += 1;
        if lhs == rhs {
            return;
        }
        eq.failures += 1;
        self.verdict = Verdict::Fail;
        if eq.failures <= MAX_WITNESSES {
            self.failures.push(Failure {
                equation: eq.name.clone(),
                instance: instance
                    .iter()
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .collect(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }

    pub fn equation(&self, name: &str) -> Option<&EquationResult> {
        self.equations.iter().find(|e| e.name == name)
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(self).expect("report serialises")
    }

    /// Human-readable summary, one line per equation and witness.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let verdict = match (self.passed(), self.mode.as_deref()) {
            (true, Some("refute-only")) => "PASS (constant instances)",
            (true, _) => "PASS",
            (false, _) => "FAIL",
        };
        match self.k {
            Some(k) => out.push_str(&format!("{} (k = {k}): {verdict}\n", self.check)),
            None => out.push_str(&format!("{}: {verdict}\n", self.check)),
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        for e in &self.equations {
            let status = if e.failures == 0 { "ok" } else { "FAILED" };
            out.push_str(&format!(
                "  {:<6} {:<44} {status} ({} instances, {} failing)\n",
                e.name, e.text, e.instances, e.failures
            ));
        }
        for f in &self.failures {
            let inst = f
                .instance
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(", ");
            out.push_str(&format!(
                "  witness {}: [{inst}] lhs = {} ≠ rhs = {}\n",
                f.equation, f.lhs, f.rhs
            ));
        }
        out
    }
}
