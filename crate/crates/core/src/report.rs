//! Machine-readable verification reports: one row per index compared,
//! exact rationals serialized as "p/q" strings, deterministic field order.

use num::rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Display;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportRow {
    pub n: i64,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Provenance {
    pub version: String,
    pub cache_hits: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RelationReport {
    pub schema: u32,
    pub relation: String,
    pub params: BTreeMap<String, String>,
    pub rows: Vec<ReportRow>,
    pub summary: Summary,
    pub provenance: Provenance,
}

impl RelationReport {
    pub fn new(relation: &str) -> Self {
        RelationReport {
            schema: 1,
            relation: relation.to_string(),
            params: BTreeMap::new(),
            rows: Vec::new(),
            summary: Summary { pass: 0, fail: 0 },
            provenance: Provenance {
                version: crate::version(),
                cache_hits: 0,
            },
        }
    }

    pub fn param(&mut self, key: &str, value: impl Display) {
        self.params.insert(key.to_string(), value.to_string());
    }

    pub fn push_row(&mut self, n: i64, lhs: &BigRational, rhs: &BigRational) {
        let equal = lhs == rhs;
        if equal {
            self.summary.pass += 1;
        } else {
            self.summary.fail += 1;
        }
        self.rows.push(ReportRow {
            n,
            lhs: crate::dirichlet::rational_str(lhs),
            rhs: crate::dirichlet::rational_str(rhs),
            equal,
        });
    }

    /// Record an already-judged comparison (for boolean verdicts).
    pub fn push_verdict(&mut self, n: i64, lhs: String, rhs: String, equal: bool) {
        if equal {
            self.summary.pass += 1;
        } else {
            self.summary.fail += 1;
        }
        self.rows.push(ReportRow { n, lhs, rhs, equal });
    }

    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn first_failure(&self) -> String {
        self.rows
            .iter()
            .find(|r| !r.equal)
            .map(|r| format!("n={}: lhs={} rhs={}", r.n, r.lhs, r.rhs))
            .unwrap_or_else(|| "no failures".to_string())
    }

    pub fn set_cache_hits(&mut self, hits: u64) {
        self.provenance.cache_hits = hits;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// CSV with the column layout n,lhs,rhs,equal.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,lhs,rhs,equal\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.n, r.lhs, r.rhs, r.equal));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::{frac, rat};

    #[test]
    fn report_counts_and_serialization() {
        let mut r = RelationReport::new("demo");
        r.param("disc", 5);
        r.push_row(1, &rat(2), &rat(2));
        r.push_row(2, &frac(1, 3), &frac(1, 4));
        assert_eq!(r.summary.pass, 1);
        assert_eq!(r.summary.fail, 1);
        assert!(!r.all_pass());
        let json = r.to_json();
        let back: RelationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(r.to_csv().contains("2,1/3,1/4,false"));
    }
}
