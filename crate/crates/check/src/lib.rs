//! Acceptance criteria as functions of a seed. Each returns a
//! [`CriterionReport`] whose metrics are a pure function of the seed.

mod correlation;
mod dynamics;
mod operators;
mod riesz;
mod space;
mod stats;

use std::collections::BTreeMap;

use fcurve_core::noise::{stream, Domain};
use fcurve_core::Result;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use correlation::criterion_9;
pub use dynamics::{criterion_6, criterion_7};
pub use operators::{criterion_3, criterion_4, criterion_5};
pub use riesz::criterion_8;
pub use space::{criterion_1, criterion_2};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub metrics: BTreeMap<String, f64>,
    /// Failure details; empty when passed.
    pub notes: Vec<String>,
}

impl CriterionReport {
    fn new(id: u8, name: &str) -> Self {
        Self { id, name: name.into(), passed: true, metrics: BTreeMap::new(), notes: Vec::new() }
    }

    fn metric(&mut self, key: &str, v: f64) {
        self.metrics.insert(key.into(), v);
    }

    /// Records `value` and fails the report unless `ok`.
    fn require(&mut self, key: &str, value: f64, ok: bool, what: impl Into<String>) {
        self.metric(key, value);
        if !ok {
            self.passed = false;
            self.notes.push(what.into());
        }
    }

    /// Runs `body`, turning an error into a failed report.
    fn run(id: u8, name: &str, body: impl FnOnce(&mut Self) -> Result<()>) -> Self {
        let mut r = Self::new(id, name);
        if let Err(e) = body(&mut r) {
            r.passed = false;
            r.notes.push(format!("error: {e}"));
        }
        r
    }

    pub fn line(&self) -> String {
        format!("{} criterion {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name)
    }
}

pub type CriterionFn = fn(u64) -> CriterionReport;

/// Criteria 1 to 9 in order. Criterion 10 (replay determinism) is checked
/// by running the command-line tool twice.
pub const CRITERIA: [CriterionFn; 9] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
];

pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    CRITERIA.iter().map(|f| f(seed)).collect()
}

fn rng(seed: u64, criterion: u64, i: u64) -> ChaCha8Rng {
    stream(seed, criterion, i, Domain::Check)
}
