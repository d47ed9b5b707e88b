use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

/// Schema tag carried by every JSON document the crate emits.
pub const SCHEMA: &str = "ramcalc/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One checked relation `lhs relation rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseRecord {
    pub id: String,
    pub inputs: Value,
    pub lhs: String,
    pub rhs: String,
    pub relation: String,
    pub status: Status,
    /// The two sides differ (slack in an inequality).
    pub strict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transversal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CaseRecord {
    pub fn new(id: impl Into<String>, inputs: Value) -> Self {
        Self {
            id: id.into(),
            inputs,
            lhs: String::new(),
            rhs: String::new(),
            relation: String::new(),
            status: Status::Skip,
            strict: false,
            transversal: None,
            note: None,
        }
    }

    /// Record `lhs relation rhs` with its verdict.
    pub fn compare(mut self, lhs: impl ToString, relation: &str, rhs: impl ToString, holds: bool, strict: bool) -> Self {
        self.lhs = lhs.to_string();
        self.rhs = rhs.to_string();
        self.relation = relation.to_string();
        self.status = if holds { Status::Pass } else { Status::Fail };
        self.strict = strict;
        self
    }

    pub fn skip(mut self, note: impl Into<String>) -> Self {
        self.status = Status::Skip;
        self.note = Some(note.into());
        self
    }

    pub fn transversal(mut self, t: Option<bool>) -> Self {
        self.transversal = t;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    pub strict: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub suite: String,
    pub scenario: Value,
    pub seed: u64,
    pub cases: Vec<CaseRecord>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    pub summary: Summary,
}

impl VerifyReport {
    pub fn new(suite: impl Into<String>, seed: u64) -> Self {
        Self {
            schema: SCHEMA,
            suite: suite.into(),
            scenario: Value::Null,
            seed,
            cases: Vec::new(),
            details: Value::Null,
            summary: Summary::default(),
        }
    }

    pub fn with_scenario(mut self, scenario: Value) -> Self {
        self.scenario = scenario;
        self
    }

    pub fn push(&mut self, case: CaseRecord) {
        let s = &mut self.summary;
        s.total += 1;
        match case.status {
            Status::Pass => s.pass += 1,
            Status::Fail => s.fail += 1,
            Status::Skip => s.skip += 1,
        }
        if case.strict {
            s.strict += 1;
        }
        self.cases.push(case);
    }

    /// No case failed.
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// The first failing case, if any.
    pub fn first_failure(&self) -> Option<&CaseRecord> {
        self.cases.iter().find(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned text table, one row per case, then the summary.
    pub fn to_table(&self) -> String {
        let head = ["id", "lhs", "rel", "rhs", "status", "transversal", "note"];
        let rows: Vec<[String; 7]> = self
            .cases
            .iter()
            .map(|c| {
                [
                    c.id.clone(),
                    c.lhs.clone(),
                    c.relation.clone(),
                    c.rhs.clone(),
                    format!("{:?}", c.status).to_lowercase(),
                    c.transversal.map_or(String::new(), |t| t.to_string()),
                    c.note.clone().unwrap_or_default(),
                ]
            })
            .collect();
        let mut out = format!("suite {} (seed {})\n", self.suite, self.seed);
        out.push_str(&render_table(&head, &rows));
        let s = &self.summary;
        let _ = writeln!(
            out,
            "total {}  pass {}  fail {}  skip {}  strict {}",
            s.total, s.pass, s.fail, s.skip, s.strict
        );
        out
    }
}

/// Left-aligned columns separated by two spaces.
pub fn render_table<const N: usize>(head: &[&str; N], rows: &[[String; N]]) -> String {
    let mut width = head.map(|h| h.chars().count());
    for r in rows {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(width).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(cell);
            if i + 1 < N {
                s.extend(std::iter::repeat_n(' ', w - cell.chars().count()));
            }
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(head.to_vec());
    for r in rows {
        line(r.iter().map(String::as_str).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_counts_and_table() {
        let mut r = VerifyReport::new("demo", 7);
        r.push(CaseRecord::new("a", Value::Null).compare(3, ">=", 2, true, true));
        r.push(CaseRecord::new("b", Value::Null).compare(2, ">=", 3, false, true));
        r.push(CaseRecord::new("c", Value::Null).skip("nothing to check"));
        assert_eq!(r.summary, Summary { total: 3, pass: 1, fail: 1, skip: 1, strict: 2 });
        assert!(!r.passed());
        assert_eq!(r.first_failure().unwrap().id, "b");
        let t = r.to_table();
        assert!(t.contains("a   3    >=   2    pass"));
        assert!(r.to_json().contains("\"schema\": \"ramcalc/1\""));
    }
}
