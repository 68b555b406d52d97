use crate::error::{Error, Result};

/// Environment variable that overrides the default candidate cap.
pub const BUDGET_ENV: &str = "SPANFORGE_BUDGET";

pub const DEFAULT_CAP: u64 = 1_000_000;

/// Caps on brute-force enumeration. Exceeding either cap aborts the query
/// with [`Error::BudgetExceeded`]; no partial answers are returned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Cospans enumerated by one whole-category query.
    pub max_cospans: u64,
    /// Candidate spans enumerated by one single-cospan query.
    pub max_candidates: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_cospans: DEFAULT_CAP,
            max_candidates: DEFAULT_CAP,
        }
    }
}

impl Budget {
    pub fn with_candidates(max_candidates: u64) -> Self {
        Budget {
            max_candidates,
            ..Budget::default()
        }
    }

    pub fn unlimited() -> Self {
        Budget {
            max_cospans: u64::MAX,
            max_candidates: u64::MAX,
        }
    }

    /// Default budget, with the candidate cap taken from `SPANFORGE_BUDGET` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map(Budget::with_candidates)
                .map_err(|_| Error::PreconditionFailed(format!("{BUDGET_ENV}={v} is not a count"))),
            Err(_) => Ok(Budget::default()),
        }
    }

    pub(crate) fn candidates(&self, n: u64) -> Result<()> {
        if n > self.max_candidates {
            Err(Error::BudgetExceeded {
                what: "candidate spans",
                limit: self.max_candidates,
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn cospans(&self, n: u64) -> Result<()> {
        if n > self.max_cospans {
            Err(Error::BudgetExceeded {
                what: "cospans",
                limit: self.max_cospans,
            })
        } else {
            Ok(())
        }
    }
}
