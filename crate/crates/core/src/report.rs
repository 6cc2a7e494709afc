//! Pass/fail reports produced by the axiom validators.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// Failed, with a human-readable counterexample.
    Fail(String),
    /// Not checked mechanically; holds by construction (builtin real carriers).
    Assumed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        Self {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, outcome: Outcome) {
        self.checks.push(Check {
            name: name.into(),
            outcome,
        });
    }

    /// Records `Pass` when `witness` is `None`, otherwise `Fail(witness)`.
    pub fn record(&mut self, name: impl Into<String>, witness: Option<String>) {
        let outcome = match witness {
            None => Outcome::Pass,
            Some(w) => Outcome::Fail(w),
        };
        self.push(name, outcome);
    }

    pub fn passed(&self) -> bool {
        self.checks
            .iter()
            .all(|c| !matches!(c.outcome, Outcome::Fail(_)))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks
            .iter()
            .filter(|c| matches!(c.outcome, Outcome::Fail(_)))
    }

    pub fn get(&self, name: &str) -> Option<&Outcome> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| &c.outcome)
    }

    /// `key value` lines: one per check, then `result pass|fail`.
    pub fn render_lines(&self) -> String {
        let mut out = format!("subject {}\n", self.subject);
        for c in &self.checks {
            match &c.outcome {
                Outcome::Pass => out.push_str(&format!("{} pass\n", c.name)),
                Outcome::Assumed => out.push_str(&format!("{} assumed\n", c.name)),
                Outcome::Fail(w) => out.push_str(&format!("{} fail {}\n", c.name, w)),
            }
        }
        out.push_str(if self.passed() {
            "result pass\n"
        } else {
            "result fail\n"
        });
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.checks {
            match &c.outcome {
                Outcome::Pass => writeln!(f, "  ok      {}", c.name)?,
                Outcome::Assumed => writeln!(f, "  assumed {}", c.name)?,
                Outcome::Fail(w) => writeln!(f, "  FAILED  {}: witness {}", c.name, w)?,
            }
        }
        write!(
            f,
            "{}",
            if self.passed() { "all checks passed" } else { "validation failed" }
        )
    }
}
