//! Check reports: one record per verified assertion or acceptance check,
//! with a machine-readable JSON rendering. Reports are byte-stable across
//! runs and worker counts apart from the runtime field.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

/// Where an expected value comes from: a stored catalog constant, a catalog
/// formula evaluation, an independent brute-force oracle, or a definitional
/// identity.
pub const PROV_CATALOG: &str = "catalog";
pub const PROV_FORMULA: &str = "formula";
pub const PROV_ORACLE: &str = "oracle";
pub const PROV_DEFINITION: &str = "definition";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    pub provenance: String,
    pub runtime_ms: u128,
}

impl Report {
    pub fn new(
        check: impl Into<String>,
        status: Status,
        expected: impl Into<String>,
        actual: impl Into<String>,
        provenance: &str,
        runtime_ms: u128,
    ) -> Report {
        Report {
            check: check.into(),
            status,
            expected: expected.into(),
            actual: actual.into(),
            provenance: provenance.to_string(),
            runtime_ms,
        }
    }

    pub fn pass(&self) -> bool {
        self.status == Status::Pass
    }

    /// One JSON object per line, runtime last so diffs ignore it easily.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).unwrap()
    }
}

/// Exit-code rule: zero iff no FAIL entries.
pub fn exit_code(reports: &[Report]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else {
        0
    }
}

/// Stable ordering for aggregated output: sorted by check id.
pub fn sort_reports(reports: &mut [Report]) {
    reports.sort_by(|a, b| a.check.cmp(&b.check));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape_and_exit_codes() {
        let r = Report::new("x/1", Status::Pass, "1", "1", PROV_ORACLE, 3);
        let line = r.to_json_line();
        assert!(line.contains("\"status\":\"PASS\""));
        assert_eq!(exit_code(&[r.clone()]), 0);
        let f = Report::new("x/2", Status::Fail, "1", "2", PROV_CATALOG, 0);
        assert_eq!(exit_code(&[r, f]), 1);
    }
}
