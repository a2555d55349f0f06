//! JSON Lines corpora: one `{"id", "matrix", "expected"?}` object per line.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::classify::{classify_decomposable, classify_stable};
use crate::error::Result;
use crate::exactmat::{IMat, Unimodular};
use crate::monodromy3::StableBudget;
use crate::report::VerdictRecord;
use crate::sweep::{map_ordered, Execution};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: String,
    pub matrix: String,
    /// verdict or case name, e.g. `Decomposable` or `MinusOneRoot`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BatchOptions {
    pub bound: u32,
    pub stable: bool,
    pub execution: Execution,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BatchEntry {
    /// falls back to `line:N` when the line has no readable id
    pub id: String,
    pub line: usize,
    pub record: Option<VerdictRecord>,
    pub error: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Mismatch {
    pub id: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BatchSummary {
    pub entries: Vec<BatchEntry>,
    pub verdict_counts: BTreeMap<String, usize>,
    pub case_counts: BTreeMap<String, usize>,
    pub mismatches: Vec<Mismatch>,
    pub errors: usize,
}

impl BatchSummary {
    /// Every nonblank line failed to parse or classify.
    pub fn all_malformed(&self) -> bool {
        !self.entries.is_empty() && self.errors == self.entries.len()
    }
}

enum Parsed {
    Entry(CorpusEntry, Unimodular),
    Bad { id: String, message: String, expected: Option<String> },
}

fn parse_line(line: &str, n: usize) -> Parsed {
    let entry: CorpusEntry = match serde_json::from_str(line) {
        Ok(e) => e,
        Err(e) => return Parsed::Bad { id: format!("line:{n}"), message: format!("malformed entry: {e}"), expected: None },
    };
    let matrix = entry.matrix.parse::<IMat>().and_then(Unimodular::new);
    match matrix {
        Ok(m) => Parsed::Entry(entry, m),
        Err(e) => Parsed::Bad { id: entry.id, message: e.to_string(), expected: entry.expected },
    }
}

fn classify_one(m: &Unimodular, opts: &BatchOptions) -> Result<VerdictRecord> {
    if opts.stable {
        let s = classify_stable(m, StableBudget::default())?;
        Ok(VerdictRecord::from_stable(m.as_mat(), &s))
    } else {
        let v = classify_decomposable(m, opts.bound)?;
        Ok(VerdictRecord::from_verdict(m.as_mat(), &v))
    }
}

/// Classifies every nonblank line. Per-entry failures are recorded and do
/// not stop the batch; entries are ordered by id, then line.
pub fn run_batch(text: &str, opts: BatchOptions) -> BatchSummary {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut entries = map_ordered(&lines, opts.execution, |&(n, line)| match parse_line(line, n) {
        Parsed::Entry(entry, m) => {
            let (record, error) = match classify_one(&m, &opts) {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            };
            (BatchEntry { id: entry.id, line: n, record, error }, entry.expected)
        }
        Parsed::Bad { id, message, expected } => {
            (BatchEntry { id, line: n, record: None, error: Some(message) }, expected)
        }
    });
    entries.sort_by(|a, b| (&a.0.id, a.0.line).cmp(&(&b.0.id, b.0.line)));
    let mut summary = BatchSummary {
        entries: Vec::new(),
        verdict_counts: BTreeMap::new(),
        case_counts: BTreeMap::new(),
        mismatches: Vec::new(),
        errors: 0,
    };
    for (entry, expected) in entries {
        let got = match &entry.record {
            Some(r) => {
                *summary.verdict_counts.entry(r.verdict.clone()).or_default() += 1;
                if let Some(c) = &r.case {
                    *summary.case_counts.entry(c.clone()).or_default() += 1;
                }
                Some(r)
            }
            None => {
                summary.errors += 1;
                None
            }
        };
        if let Some(exp) = expected {
            let matched = got.is_some_and(|r| r.verdict == exp || r.case.as_deref() == Some(exp.as_str()));
            if !matched {
                let got = got.map_or_else(|| "error".to_string(), |r| r.case.clone().unwrap_or_else(|| r.verdict.clone()));
                summary.mismatches.push(Mismatch { id: entry.id.clone(), expected: exp, got });
            }
        }
        summary.entries.push(entry);
    }
    summary
}
