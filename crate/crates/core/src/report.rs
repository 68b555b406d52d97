//! Outcome of a decision procedure, serialized verbatim by `--json`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::category::FiniteCategory;
use crate::span::{Cospan, Span};

/// Witness lists are truncated past this many entries; the number dropped is
/// recorded under the `witnesses_omitted` stat.
pub const WITNESS_LIMIT: usize = 64;

/// A span or cospan rendered with the names from its category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRecord {
    pub left: String,
    pub right: String,
    pub apex: String,
    pub left_foot: String,
    pub right_foot: String,
}

impl PairRecord {
    pub fn span(cat: &FiniteCategory, s: Span) -> Self {
        PairRecord {
            left: cat.mor_name(s.left).to_owned(),
            right: cat.mor_name(s.right).to_owned(),
            apex: cat.obj_name(s.apex(cat)).to_owned(),
            left_foot: cat.obj_name(s.left_foot(cat)).to_owned(),
            right_foot: cat.obj_name(s.right_foot(cat)).to_owned(),
        }
    }

    pub fn cospan(cat: &FiniteCategory, c: Cospan) -> Self {
        PairRecord {
            left: cat.mor_name(c.left).to_owned(),
            right: cat.mor_name(c.right).to_owned(),
            apex: cat.obj_name(c.apex(cat)).to_owned(),
            left_foot: cat.obj_name(c.left_foot(cat)).to_owned(),
            right_foot: cat.obj_name(c.right_foot(cat)).to_owned(),
        }
    }

    pub fn legs(&self) -> (&str, &str) {
        (&self.left, &self.right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub cospan: Option<PairRecord>,
    pub spans: Vec<PairRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub morphism_count: Option<u64>,
    pub detail: String,
}

impl Witness {
    pub fn new(detail: impl Into<String>) -> Self {
        Witness {
            cospan: None,
            spans: Vec::new(),
            morphism_count: None,
            detail: detail.into(),
        }
    }

    pub fn with_cospan(mut self, cat: &FiniteCategory, c: Cospan) -> Self {
        self.cospan = Some(PairRecord::cospan(cat, c));
        self
    }

    pub fn with_span(mut self, cat: &FiniteCategory, s: Span) -> Self {
        self.spans.push(PairRecord::span(cat, s));
        self
    }

    pub fn with_count(mut self, n: u64) -> Self {
        self.morphism_count = Some(n);
        self
    }
}

/// Invariant: `verdict == counterexample.is_none()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub subject: String,
    pub verdict: bool,
    pub witnesses: Vec<Witness>,
    pub counterexample: Option<Witness>,
    pub stats: BTreeMap<String, u64>,
    pub budget_hit: bool,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, subject: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            subject: subject.into(),
            verdict: true,
            witnesses: Vec::new(),
            counterexample: None,
            stats: BTreeMap::new(),
            budget_hit: false,
        }
    }

    /// Report for a query aborted by its budget.
    pub fn budget_exceeded(check: impl Into<String>, subject: impl Into<String>, detail: String) -> Self {
        let mut r = CheckReport::new(check, subject);
        r.budget_hit = true;
        r.fail(Witness::new(detail));
        r
    }

    /// Records the counterexample (first one wins) and flips the verdict.
    pub fn fail(&mut self, w: Witness) {
        self.verdict = false;
        if self.counterexample.is_none() {
            self.counterexample = Some(w);
        }
    }

    pub fn witness(&mut self, w: Witness) {
        if self.witnesses.len() < WITNESS_LIMIT {
            self.witnesses.push(w);
        } else {
            self.bump("witnesses_omitted", 1);
        }
    }

    pub fn set(&mut self, key: &str, value: u64) {
        self.stats.insert(key.to_owned(), value);
    }

    pub fn bump(&mut self, key: &str, by: u64) {
        *self.stats.entry(key.to_owned()).or_insert(0) += by;
    }

    pub fn stat(&self, key: &str) -> u64 {
        self.stats.get(key).copied().unwrap_or(0)
    }
}
