//! Finite categories, brute-force pullback search, and the span category
//! `Span(C, F)` of a span-tight functor.
//!
//! Composition is written in diagrammatic order throughout:
//! `compose(first, then)` is `then ∘ first`.

pub mod budget;
pub mod catalog;
pub mod category;
pub mod error;
pub mod generalized;
pub mod interchange;
pub mod laws;
pub mod pullback;
pub mod report;
pub mod span;

pub use budget::Budget;
pub use category::{AssociativityCheck, FiniteCategory, Functor, MorId, Morphism, ObjId};
pub use error::{Error, Result, ValidationReport, Violation};
pub use generalized::{
    build_span_category, classic_equivalence, compose_along, find_f_pullbacks, is_span_tight,
    ClassId, SpanCategory,
};
pub use laws::{check_category_laws, LawConfig, LawMode};
pub use pullback::{
    enumerate_cospans, find_pullbacks, has_pullbacks, is_pullback, paired_spans,
    preserves_pullbacks, PullbackProbe,
};
pub use report::{CheckReport, PairRecord, Witness};
pub use span::{canonicalize, is_paired, Cospan, Span, SpanClass};
