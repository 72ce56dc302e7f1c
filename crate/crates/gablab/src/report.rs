//! Report assembly: per-case records with a canonical ordering, summary
//! counts, and deterministic pretty-JSON output (the single `timestamp`
//! field is the only wall-clock content).

use std::time::{SystemTime, UNIX_EPOCH};

use gablab_core::group::Subgroup;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

pub const VERDICT_PASS: &str = "pass";
pub const VERDICT_FAIL: &str = "fail";
pub const VERDICT_SKIPPED: &str = "skipped: precondition";

/// A lattice as it appears in a report: generators, full element list
/// (canonical order), and order. Element lists double as sort keys.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct LatticeRecord {
    pub order: u64,
    pub generators: Vec<Vec<u64>>,
    pub elements: Vec<Vec<u64>>,
}

impl LatticeRecord {
    pub fn from_subgroup(sub: &Subgroup) -> LatticeRecord {
        LatticeRecord {
            order: sub.order(),
            generators: sub
                .generators()
                .iter()
                .map(|e| e.residues().to_vec())
                .collect(),
            elements: sub
                .elements()
                .iter()
                .map(|e| e.residues().to_vec())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseRecord {
    #[serde(rename = "timeLattice")]
    pub time_lattice: LatticeRecord,
    #[serde(rename = "freqLattice")]
    pub freq_lattice: LatticeRecord,
    pub window: String,
    pub task: String,
    pub verdict: String,
    pub tolerance: f64,
    pub payload: Value,
}

/// Canonical case order: time lattice (order, then elements), frequency
/// lattice likewise, then task name.
type CaseKey<'a> = (u64, &'a Vec<Vec<u64>>, u64, &'a Vec<Vec<u64>>, &'a str);

impl CaseRecord {
    fn sort_key(&self) -> CaseKey<'_> {
        (
            self.time_lattice.order,
            &self.time_lattice.elements,
            self.freq_lattice.order,
            &self.freq_lattice.elements,
            self.task.as_str(),
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    #[serde(rename = "schemaVersion")]
    pub schema_version: u32,
    /// Seconds since the Unix epoch at assembly time; excluded from
    /// determinism comparisons.
    pub timestamp: u64,
    pub group: Vec<u64>,
    pub window: String,
    pub tolerance: f64,
    pub cases: Vec<CaseRecord>,
    pub summary: Summary,
}

impl Report {
    /// Sorts cases canonically by (|Λ|, Λ elements lex, |Γ|, Γ elements lex,
    /// task name), tallies verdicts, and stamps the wall clock.
    pub fn assemble(
        group: Vec<u64>,
        window: String,
        tolerance: f64,
        mut cases: Vec<CaseRecord>,
    ) -> Report {
        cases.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        let mut summary = Summary::default();
        for case in &cases {
            match case.verdict.as_str() {
                VERDICT_PASS => summary.pass += 1,
                VERDICT_FAIL => summary.fail += 1,
                _ => summary.skipped += 1,
            }
        }
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Report {
            schema_version: SCHEMA_VERSION,
            timestamp,
            group,
            window,
            tolerance,
            cases,
            summary,
        }
    }

    /// Exit-code semantics: skipped preconditions count as passes.
    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0
    }

    /// Pretty JSON with a trailing newline; float formatting is the shortest
    /// round-trip decimal, object keys are emitted in fixed order.
    pub fn to_json_string(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn lattice(order: u64, elements: Vec<Vec<u64>>) -> LatticeRecord {
        LatticeRecord {
            order,
            generators: vec![],
            elements,
        }
    }

    fn case(lam_order: u64, lam_first: u64, task: &str, verdict: &str) -> CaseRecord {
        CaseRecord {
            time_lattice: lattice(lam_order, vec![vec![lam_first]]),
            freq_lattice: lattice(1, vec![vec![0]]),
            window: "delta".to_string(),
            task: task.to_string(),
            verdict: verdict.to_string(),
            tolerance: 1e-9,
            payload: json!({}),
        }
    }

    #[test]
    fn cases_are_sorted_and_counted() {
        let cases = vec![
            case(2, 0, "tight", VERDICT_PASS),
            case(1, 0, "duality", VERDICT_FAIL),
            case(2, 0, "duality", VERDICT_SKIPPED),
            case(2, 1, "duality", VERDICT_PASS),
        ];
        let report = Report::assemble(vec![4], "delta".to_string(), 1e-9, cases);
        let keys: Vec<(u64, u64, String)> = report
            .cases
            .iter()
            .map(|c| {
                (
                    c.time_lattice.order,
                    c.time_lattice.elements[0][0],
                    c.task.clone(),
                )
            })
            .collect();
        assert_eq!(
            keys,
            vec![
                (1, 0, "duality".to_string()),
                (2, 0, "duality".to_string()),
                (2, 0, "tight".to_string()),
                (2, 1, "duality".to_string()),
            ]
        );
        assert_eq!(
            report.summary,
            Summary {
                pass: 2,
                fail: 1,
                skipped: 1
            }
        );
        assert!(!report.all_pass());
    }

    #[test]
    fn report_serializes_with_schema_version_and_timestamp_line() {
        let report = Report::assemble(vec![2], "delta".to_string(), 1e-9, vec![]);
        assert!(report.all_pass());
        let text = report.to_json_string();
        assert!(text.contains("\"schemaVersion\": 1"));
        let stamp_lines: Vec<&str> = text
            .lines()
            .filter(|l| l.trim_start().starts_with("\"timestamp\""))
            .collect();
        assert_eq!(stamp_lines.len(), 1, "one isolated timestamp line");
        assert!(text.ends_with('\n'));
    }
}
