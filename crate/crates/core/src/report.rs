//! Verification reports: an ordered list of law checks with witnesses.

use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

/// One law, its stable anchor, and a witness iff it failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub law: String,
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report { subject: subject.into(), checks: Vec::new() }
    }

    pub fn pass(&mut self, law: &str, anchor: &str) {
        self.checks.push(Check {
            law: law.to_string(),
            anchor: anchor.to_string(),
            status: Status::Pass,
            witness: None,
        });
    }

    pub fn fail(&mut self, law: &str, anchor: &str, witness: impl Into<String>) {
        self.checks.push(Check {
            law: law.to_string(),
            anchor: anchor.to_string(),
            status: Status::Fail,
            witness: Some(witness.into()),
        });
    }

    /// Records PASS when `witness` is `None`, FAIL with the witness otherwise.
    pub fn record(&mut self, law: &str, anchor: &str, witness: Option<String>) {
        match witness {
            None => self.pass(law, anchor),
            Some(w) => self.fail(law, anchor, w),
        }
    }

    /// Appends the checks of `other`, prefixing their law names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.law = format!("{prefix}: {}", c.law);
            }
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    pub fn has_failure(&self, law: &str) -> bool {
        self.checks
            .iter()
            .any(|c| c.status == Status::Fail && c.law.ends_with(law))
    }

    pub fn verdict(&self) -> &'static str {
        if self.passed() {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "report: {}", self.subject)?;
        for c in &self.checks {
            match (&c.status, &c.witness) {
                (Status::Pass, _) => writeln!(f, "  PASS  {} [{}]", c.law, c.anchor)?,
                (Status::Fail, w) => writeln!(
                    f,
                    "  FAIL  {} [{}] witness: {}",
                    c.law,
                    c.anchor,
                    w.as_deref().unwrap_or("-")
                )?,
            }
        }
        writeln!(f, "verdict: {}", self.verdict())
    }
}
