//! Harness behind the `cvqt` binary: parameter sweeps, figure-dataset
//! reproduction, and analytic-vs-oracle verification runs.

pub mod output;
pub mod reproduce;
pub mod sweep;
pub mod verify;

/// Outcome of a single named check.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: String,
    pub expected: String,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        passed: bool,
        measured: impl Into<String>,
        expected: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            passed,
            measured: measured.into(),
            expected: expected.into(),
        }
    }

    pub fn print(&self) {
        println!(
            "{} {}: measured {} (expected {})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.expected
        );
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}
