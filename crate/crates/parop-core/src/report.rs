//! Verification reports shared by the identity-checking suites.

use serde::Serialize;

/// A single failed identity, with enough context to reproduce it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: String,
    pub parameters: String,
    pub status: String,
}

/// Outcome of a verification sweep: how many identities were checked and
/// which ones failed. An empty violation list means the sweep passed.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Record one identity check; `passed == false` appends a violation.
    pub fn check(&mut self, passed: bool, identity: &str, parameters: String) {
        self.checks += 1;
        if !passed {
            self.violations.push(Violation {
                identity: identity.to_string(),
                parameters,
                status: "failed".to_string(),
            });
        }
    }

    pub fn absorb(&mut self, other: Report) {
        self.checks += other.checks;
        self.violations.extend(other.violations);
    }
}
