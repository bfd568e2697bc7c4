//! Validation reports: one record per checked identity.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::tensor::Tensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub at: String,
    pub lhs: String,
    pub rhs: String,
}

impl Witness {
    pub fn new(at: impl Into<String>, lhs: impl ToString, rhs: impl ToString) -> Self {
        Witness { at: at.into(), lhs: lhs.to_string(), rhs: rhs.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub identity_id: String,
    pub paper_label: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub records: Vec<Record>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classicality: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// First disagreement among `(location, lhs, rhs)` triples.
pub fn first_mismatch<I>(items: I) -> Option<Witness>
where
    I: IntoIterator<Item = (String, Tensor, Tensor)>,
{
    items.into_iter().find(|(_, l, r)| l != r).map(|(at, l, r)| Witness::new(at, l, r))
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, id: &str, label: &str, outcome: Option<Witness>) {
        let status = if outcome.is_some() { Status::Fail } else { Status::Pass };
        self.push(id, label, status, outcome);
    }

    pub fn vacuous(&mut self, id: &str, label: &str) {
        self.push(id, label, Status::Vacuous, None);
    }

    pub fn push(&mut self, id: &str, label: &str, status: Status, witness: Option<Witness>) {
        self.records.push(Record {
            identity_id: id.to_string(),
            paper_label: label.to_string(),
            status,
            witness,
            timing_ms: None,
        });
    }

    /// Run a check and record it together with its wall time.
    pub fn timed(&mut self, id: &str, label: &str, check: impl FnOnce() -> Option<Witness>) {
        let start = Instant::now();
        let outcome = check();
        self.record(id, label, outcome);
        if let Some(r) = self.records.last_mut() {
            r.timing_ms = Some(start.elapsed().as_millis() as u64);
        }
    }

    /// Replace the leading id component `old` by `new`.
    pub fn with_prefix(mut self, old: &str, new: &str) -> Self {
        for r in &mut self.records {
            if let Some(rest) = r.identity_id.strip_prefix(old) {
                r.identity_id = format!("{new}{rest}");
            }
        }
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.records.extend(other.records);
        self.notes.extend(other.notes);
        if other.classicality.is_some() {
            self.classicality = other.classicality;
        }
    }

    /// Sort records by id and drop timings unless requested. Duplicate ids
    /// are a programming error.
    pub fn finish(&mut self, keep_timing: bool) {
        self.records.sort_by(|a, b| a.identity_id.cmp(&b.identity_id));
        for w in self.records.windows(2) {
            assert_ne!(w[0].identity_id, w[1].identity_id, "duplicate identity id");
        }
        if !keep_timing {
            for r in &mut self.records {
                r.timing_ms = None;
            }
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn get(&self, id: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.identity_id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Vacuous => "vacuous",
            };
            let _ = write!(s, "{status:8} {} ({})", r.identity_id, r.paper_label);
            if let Some(t) = r.timing_ms {
                let _ = write!(s, " {t}ms");
            }
            s.push('\n');
            if let Some(w) = &r.witness {
                let _ = writeln!(s, "         at {}\n         lhs = {}\n         rhs = {}", w.at, w.lhs, w.rhs);
            }
        }
        if let Some(c) = &self.classicality {
            let _ = writeln!(s, "classicality: {c}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }
}
