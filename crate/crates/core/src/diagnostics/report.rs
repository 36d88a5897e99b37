use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Outcome of one check. A plain check fails iff `max_violation > tolerance`;
/// a sensitivity control (`expect_violation`) passes iff it does.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub samples: usize,
    /// Samples dropped because they left the domain.
    pub skipped: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub expect_violation: bool,
    pub status: CheckStatus,
    /// What the quantity was compared against.
    pub oracle: String,
}

impl CheckReport {
    pub fn new(
        name: impl Into<String>,
        oracle: impl Into<String>,
        samples: usize,
        skipped: usize,
        max_violation: f64,
        tolerance: f64,
    ) -> Self {
        let mut report = Self {
            name: name.into(),
            samples,
            skipped,
            max_violation,
            tolerance,
            expect_violation: false,
            status: CheckStatus::Inconclusive,
            oracle: oracle.into(),
        };
        report.status = report.judge();
        report
    }

    pub fn inconclusive(name: impl Into<String>, oracle: impl Into<String>, samples: usize) -> Self {
        Self {
            name: name.into(),
            samples,
            skipped: 0,
            max_violation: f64::NAN,
            tolerance: f64::NAN,
            expect_violation: false,
            status: CheckStatus::Inconclusive,
            oracle: oracle.into(),
        }
    }

    /// Turn the report into a sensitivity control.
    pub fn expecting_violation(mut self) -> Self {
        if self.status != CheckStatus::Inconclusive || self.samples > 0 {
            self.expect_violation = true;
            self.status = self.judge();
        }
        self
    }

    pub fn violated(&self) -> bool {
        // NaN counts as a violation.
        !(self.max_violation <= self.tolerance)
    }

    fn judge(&self) -> CheckStatus {
        if self.samples == 0 {
            CheckStatus::Inconclusive
        } else if self.violated() == self.expect_violation {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    /// One line of the text report.
    pub fn text_line(&self) -> String {
        format!(
            "{:<12} {}{} samples={} skipped={} max_violation={:.6e} tol={:.1e} oracle={}",
            self.status.to_string(),
            self.name,
            if self.expect_violation { " (control)" } else { "" },
            self.samples,
            self.skipped,
            self.max_violation,
            self.tolerance,
            self.oracle
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_rules() {
        assert_eq!(CheckReport::new("a", "o", 3, 0, 1e-9, 1e-8).status, CheckStatus::Pass);
        assert_eq!(CheckReport::new("a", "o", 3, 0, 1e-7, 1e-8).status, CheckStatus::Fail);
        assert_eq!(CheckReport::new("a", "o", 3, 0, f64::NAN, 1e-8).status, CheckStatus::Fail);
        assert_eq!(CheckReport::new("a", "o", 0, 5, 0.0, 1e-8).status, CheckStatus::Inconclusive);
        let control = CheckReport::new("a", "o", 3, 0, 1e-7, 1e-8).expecting_violation();
        assert_eq!(control.status, CheckStatus::Pass);
        let vacuous = CheckReport::new("a", "o", 3, 0, 0.0, 1e-8).expecting_violation();
        assert_eq!(vacuous.status, CheckStatus::Fail);
        assert!(control.text_line().starts_with("PASS"));
        assert!(control.text_line().contains("(control)"));
    }
}
