use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::report::CheckReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Invalid(ValidationReport),

    #[error("morphisms `{first}` and `{then}` are not composable")]
    NotComposable { first: String, then: String },

    #[error("morphism `{0}` is not an isomorphism")]
    NotIso(String),

    #[error("dangling reference: {0}")]
    DanglingReference(String),

    #[error("feet mismatch: {0}")]
    FeetMismatch(String),

    #[error("span is not paired with the cospan: {0}")]
    NotPaired(String),

    #[error("`{0}` is not a span: legs have different sources")]
    NotASpan(String),

    #[error("`{0}` is not a cospan: legs have different targets")]
    NotACospan(String),

    #[error("no F-pullback exists for the cospan ({left}, {right}); composition is undefined")]
    NoFPullback { left: String, right: String },

    #[error("functor `{}` is not span tight", .0.subject)]
    NotSpanTight(Box<CheckReport>),

    #[error("budget exceeded: more than {limit} {what}")]
    BudgetExceeded { what: &'static str, limit: u64 },

    #[error("generator parameter out of range: {0}")]
    CapExceeded(String),

    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("hom set Hom({base}, {object}) has {size} elements, target only reaches size {cap}")]
    HomSetTooLarge {
        base: String,
        object: String,
        size: usize,
        cap: usize,
    },

    #[error("fibered product has {size} elements but the category stops at {cap}")]
    ApexExceedsCap { size: usize, cap: usize },

    #[error("not a catalog category: {0}")]
    NotCatalog(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}, column {column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

/// Every axiom violation found while validating a category or functor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub subject: String,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport {
            subject: subject.into(),
            violations: Vec::new(),
        }
    }

    pub fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub(crate) fn into_result(self) -> Result<()> {
        if self.violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "`{}` failed validation with {} violation(s)",
            self.subject,
            self.violations.len()
        )?;
        for v in &self.violations {
            write!(f, "\n  - {v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateName {
        what: String,
        name: String,
    },
    DanglingReference {
        context: String,
        name: String,
    },
    BadIdentity {
        object: String,
        detail: String,
    },
    MissingComposite {
        first: String,
        then: String,
    },
    UnexpectedComposite {
        first: String,
        then: String,
    },
    DuplicateComposite {
        first: String,
        then: String,
    },
    BadComposite {
        first: String,
        then: String,
        equals: String,
    },
    AssociativityViolation {
        first: String,
        second: String,
        third: String,
    },
    /// A functor fails to respect sources/targets, identities, or composites.
    NotAFunctor {
        detail: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateName { what, name } => write!(f, "duplicate {what} `{name}`"),
            Violation::DanglingReference { context, name } => {
                write!(f, "{context} refers to unknown `{name}`")
            }
            Violation::BadIdentity { object, detail } => {
                write!(f, "bad identity at `{object}`: {detail}")
            }
            Violation::MissingComposite { first, then } => {
                write!(f, "missing composite: `{first}` then `{then}`")
            }
            Violation::UnexpectedComposite { first, then } => {
                write!(f, "composite listed for non-composable pair `{first}` then `{then}`")
            }
            Violation::DuplicateComposite { first, then } => {
                write!(f, "composite of `{first}` then `{then}` listed twice")
            }
            Violation::BadComposite {
                first,
                then,
                equals,
            } => write!(
                f,
                "`{first}` then `{then}` = `{equals}` has the wrong source or target"
            ),
            Violation::AssociativityViolation {
                first,
                second,
                third,
            } => write!(
                f,
                "associativity fails for `{first}` then `{second}` then `{third}`"
            ),
            Violation::NotAFunctor { detail } => write!(f, "not a functor: {detail}"),
        }
    }
}
