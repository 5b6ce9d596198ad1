//! Machine-readable verification reports.
//!
//! One report holds a row per checked identity (or named check) and a global
//! block echoing the seed and configuration. Serialization targets:
//!
//! * JSON — the report fields verbatim, rationals as `p/q` strings; byte
//!   deterministic for a fixed seed and configuration apart from the
//!   `wall_time_ms` field;
//! * CSV — one row per identity: id, attempted, passed, failures,
//!   poles_skipped, constraint_skipped;
//! * text — a human-oriented table with failure details.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::registry::Verdict;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub per_identity: Vec<IdentityReport>,
    pub global: GlobalInfo,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityReport {
    pub id: String,
    pub attempted: u64,
    pub passed: u64,
    pub poles_skipped: u64,
    pub constraint_skipped: u64,
    pub failures: Vec<FailureRecord>,
}

/// A failed comparison, with the full exact parameter echo for replay.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FailureRecord {
    pub params: Map<String, Value>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlobalInfo {
    pub seed: u64,
    pub config: Value,
    pub wall_time_ms: u64,
}

impl IdentityReport {
    pub fn new(id: impl Into<String>) -> Self {
        IdentityReport {
            id: id.into(),
            attempted: 0,
            passed: 0,
            poles_skipped: 0,
            constraint_skipped: 0,
            failures: Vec::new(),
        }
    }

    pub fn record(&mut self, verdict: Verdict, failure: Option<FailureRecord>) {
        self.attempted += 1;
        match verdict {
            Verdict::Equal => self.passed += 1,
            Verdict::Pole => self.poles_skipped += 1,
            Verdict::ConstraintViolation => self.constraint_skipped += 1,
            Verdict::Unequal => {
                self.failures.push(failure.unwrap_or_else(|| FailureRecord {
                    params: Map::new(),
                    lhs: String::new(),
                    rhs: String::new(),
                }));
            }
        }
    }

    /// attempted = passed + failures + poles + constraint skips.
    pub fn arithmetic_holds(&self) -> bool {
        self.attempted
            == self.passed
                + self.failures.len() as u64
                + self.poles_skipped
                + self.constraint_skipped
    }
}

impl VerificationReport {
    pub fn total_failures(&self) -> u64 {
        self.per_identity.iter().map(|r| r.failures.len() as u64).sum()
    }

    pub fn arithmetic_holds(&self) -> bool {
        self.per_identity.iter().all(|r| r.arithmetic_holds())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,attempted,passed,failures,poles_skipped,constraint_skipped\n");
        for r in &self.per_identity {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.id,
                r.attempted,
                r.passed,
                r.failures.len(),
                r.poles_skipped,
                r.constraint_skipped
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<10} {:>9} {:>7} {:>8} {:>13} {:>18}\n",
            "identity", "attempted", "passed", "failures", "poles_skipped", "constraint_skipped"
        ));
        for r in &self.per_identity {
            out.push_str(&format!(
                "{:<10} {:>9} {:>7} {:>8} {:>13} {:>18}\n",
                r.id,
                r.attempted,
                r.passed,
                r.failures.len(),
                r.poles_skipped,
                r.constraint_skipped
            ));
            for f in &r.failures {
                let params: Vec<String> =
                    f.params.iter().map(|(k, v)| format!("{k}={}", render_value(v))).collect();
                out.push_str(&format!(
                    "  FAIL {} at {}: lhs = {} vs rhs = {}\n",
                    r.id,
                    params.join(" "),
                    f.lhs,
                    f.rhs
                ));
            }
        }
        out.push_str(&format!(
            "total failures: {}; seed {}; wall time {} ms\n",
            self.total_failures(),
            self.global.seed,
            self.global.wall_time_ms
        ));
        out
    }
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> VerificationReport {
        let mut row = IdentityReport::new("S0");
        row.record(Verdict::Equal, None);
        row.record(Verdict::Pole, None);
        row.record(
            Verdict::Unequal,
            Some(FailureRecord {
                params: {
                    let mut m = Map::new();
                    m.insert("x".into(), Value::String("1/2".into()));
                    m
                },
                lhs: "1/2".into(),
                rhs: "1/3".into(),
            }),
        );
        VerificationReport {
            per_identity: vec![row],
            global: GlobalInfo { seed: 42, config: Value::Null, wall_time_ms: 3 },
        }
    }

    #[test]
    fn tally_arithmetic_invariant() {
        let report = sample_report();
        assert!(report.arithmetic_holds());
        assert_eq!(report.total_failures(), 1);
    }

    #[test]
    fn csv_has_one_row_per_identity() {
        let report = sample_report();
        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(csv.lines().nth(1).unwrap(), "S0,3,1,1,1,0");
    }

    #[test]
    fn json_round_trips() {
        let report = sample_report();
        let text = report.to_json();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn text_mentions_failures() {
        let report = sample_report();
        let text = report.to_text();
        assert!(text.contains("FAIL S0 at x=1/2"));
        assert!(text.contains("total failures: 1"));
    }
}
