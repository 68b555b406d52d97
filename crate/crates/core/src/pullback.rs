//! Universal-property search for pullbacks.
//!
//! Two routes decide whether a span `S` is a pullback of a cospan `C`:
//!
//! * [`is_pullback`] follows the definition literally: enumerate every span
//!   `Q` paired with `C` and count the span morphisms `Q → S`.
//! * [`PullbackProbe`] reads the same quantifier one probe object at a time.
//!   Spans paired with `C` at apex `A` are exactly the pairs
//!   `(u, v) ∈ hom(A, C_L) × hom(A, C_R)` with `c_L∘u = c_R∘v`, and the span
//!   morphisms from such a `Q` to `S` are the `φ ∈ hom(A, S_A)` with
//!   `(s_L∘φ, s_R∘φ) = (u, v)`. So `S` is a pullback iff, for every object
//!   `A`, `φ ↦ (s_L∘φ, s_R∘φ)` is injective and `|hom(A, S_A)|` equals the
//!   number of paired pairs at `A`. Candidate apexes whose hom counts do not
//!   match are skipped without enumerating their spans.
//!
//! The searches use the probe; the literal route backs single queries and
//! the tests that cross-check the two.

use std::cell::RefCell;

use rayon::prelude::*;

use crate::budget::Budget;
use crate::category::{FiniteCategory, Functor, MorId, ObjId};
use crate::error::Result;
use crate::report::{CheckReport, Witness};
use crate::span::{canonicalize, count_span_morphisms, is_paired, Cospan, Span};

const SCAN_CHUNK: usize = 2048;

/// Every ordered pair `(c_L, c_R)` with a common target, lexicographic in MorId.
pub fn enumerate_cospans(cat: &FiniteCategory, budget: &Budget) -> Result<Vec<Cospan>> {
    let total: u64 = cat
        .objects()
        .map(|x| (cat.incoming(x).len() as u64).pow(2))
        .sum();
    budget.cospans(total)?;
    let mut out = Vec::with_capacity(total as usize);
    for l in cat.morphisms() {
        for &r in cat.incoming(cat.tgt(l)) {
            out.push(Cospan { left: l, right: r });
        }
    }
    Ok(out)
}

/// Spans paired with `c` whose apex is `a`, lexicographic in (left, right).
pub fn paired_spans_at(cat: &FiniteCategory, c: Cospan, a: ObjId) -> Vec<Span> {
    let (cl, cr) = (c.left_foot(cat), c.right_foot(cat));
    // Right legs sorted by the composite they reach, stable in MorId order.
    let mut by_value: Vec<(MorId, MorId)> = cat
        .hom(a, cr)
        .iter()
        .map(|&v| (cat.compose_unchecked(v, c.right), v))
        .collect();
    by_value.sort_unstable();
    let mut out = Vec::new();
    for &u in cat.hom(a, cl) {
        let key = cat.compose_unchecked(u, c.left);
        let start = by_value.partition_point(|&(k, _)| k < key);
        out.extend(
            by_value[start..]
                .iter()
                .take_while(|&&(k, _)| k == key)
                .map(|&(_, v)| Span { left: u, right: v }),
        );
    }
    out
}

/// Number of spans paired with `c` at apex `a`, without listing them.
pub fn paired_count_at(cat: &FiniteCategory, c: Cospan, a: ObjId) -> u64 {
    let mut left = vec![0u64; cat.morphism_count()];
    for &u in cat.hom(a, c.left_foot(cat)) {
        left[cat.compose_unchecked(u, c.left).index()] += 1;
    }
    cat.hom(a, c.right_foot(cat))
        .iter()
        .map(|&v| left[cat.compose_unchecked(v, c.right).index()])
        .sum()
}

/// Every span paired with `c`, ordered by (apex, left, right).
pub fn paired_spans(cat: &FiniteCategory, c: Cospan, budget: &Budget) -> Result<Vec<Span>> {
    let total: u64 = cat.objects().map(|a| paired_count_at(cat, c, a)).sum();
    budget.candidates(total)?;
    Ok(cat
        .objects()
        .flat_map(|a| paired_spans_at(cat, c, a))
        .collect())
}

/// Decides pullback-hood by the definition: `S` is paired with `C` and every
/// span paired with `C` has exactly one span morphism into `S`.
///
/// A failing report names the first offending `Q` and its morphism count.
pub fn is_pullback(cat: &FiniteCategory, s: Span, c: Cospan, budget: &Budget) -> Result<CheckReport> {
    let mut report = CheckReport::new("is-pullback", cat.name());
    if !is_paired(cat, s, c) {
        report.fail(
            Witness::new("span is not paired with the cospan")
                .with_cospan(cat, c)
                .with_span(cat, s),
        );
        return Ok(report);
    }
    let qs = paired_spans(cat, c, budget)?;
    report.set("spans_examined", qs.len() as u64);
    for q in &qs {
        let n = count_span_morphisms(cat, *q, s)?;
        if n != 1 {
            report.fail(
                Witness::new(format!(
                    "paired span admits {n} span morphisms into the candidate (needs exactly 1)"
                ))
                .with_cospan(cat, c)
                .with_span(cat, s)
                .with_span(cat, *q)
                .with_count(n as u64),
            );
            return Ok(report);
        }
    }
    report.witness(
        Witness::new(format!(
            "every one of the {} paired spans has a unique span morphism into it",
            qs.len()
        ))
        .with_cospan(cat, c)
        .with_span(cat, s),
    );
    Ok(report)
}

/// Per-cospan pullback test over probe objects; see the module docs.
pub struct PullbackProbe<'a> {
    cat: &'a FiniteCategory,
    cospan: Cospan,
    counts: Vec<u64>,
    order: Vec<ObjId>,
}

thread_local! {
    // Generation-stamped seen-set over pairs of outgoing positions.
    static SEEN: RefCell<(Vec<u32>, u32)> = const { RefCell::new((Vec::new(), 0)) };
}

impl<'a> PullbackProbe<'a> {
    pub fn new(cat: &'a FiniteCategory, cospan: Cospan) -> Self {
        let counts: Vec<u64> = cat.objects().map(|a| paired_count_at(cat, cospan, a)).collect();
        let mut order: Vec<ObjId> = cat.objects().collect();
        order.sort_by_key(|a| (counts[a.index()], *a));
        PullbackProbe {
            cat,
            cospan,
            counts,
            order,
        }
    }

    pub fn cospan(&self) -> Cospan {
        self.cospan
    }

    /// Number of spans paired with the cospan at apex `a`.
    pub fn paired_count(&self, a: ObjId) -> u64 {
        self.counts[a.index()]
    }

    /// Could a pullback have apex `x`? Requires `|hom(A, x)| = #paired(A)` for all `A`.
    pub fn feasible_apex(&self, x: ObjId) -> bool {
        self.order
            .iter()
            .all(|&a| self.cat.hom(a, x).len() as u64 == self.counts[a.index()])
    }

    /// Whether `s` is a pullback of the cospan.
    pub fn accepts(&self, s: Span) -> bool {
        let cat = self.cat;
        if !is_paired(cat, s, self.cospan) {
            return false;
        }
        let x = s.apex(cat);
        if !self.feasible_apex(x) {
            return false;
        }
        SEEN.with(|seen| {
            let (stamps, generation) = &mut *seen.borrow_mut();
            self.order.iter().all(|&a| {
                let hom = cat.hom(a, x);
                if hom.len() < 2 {
                    return true;
                }
                let width = cat.outgoing(a).len();
                if stamps.len() < width * width {
                    stamps.resize(width * width, 0);
                }
                *generation = generation.wrapping_add(1);
                if *generation == 0 {
                    stamps.fill(0);
                    *generation = 1;
                }
                hom.iter().all(|&phi| {
                    let l = cat.out_position(cat.compose_unchecked(phi, s.left));
                    let r = cat.out_position(cat.compose_unchecked(phi, s.right));
                    let slot = &mut stamps[l * width + r];
                    let fresh = *slot != *generation;
                    *slot = *generation;
                    fresh
                })
            })
        })
    }
}

/// Every pullback of `c`, ordered by (apex, left, right). Possibly empty.
pub fn find_pullbacks(cat: &FiniteCategory, c: Cospan, budget: &Budget) -> Result<Vec<Span>> {
    Ok(search_pullbacks(cat, c, budget)?.0)
}

/// Pullbacks together with the number of candidates examined.
pub(crate) fn search_pullbacks(
    cat: &FiniteCategory,
    c: Cospan,
    budget: &Budget,
) -> Result<(Vec<Span>, u64)> {
    let probe = PullbackProbe::new(cat, c);
    let mut found = Vec::new();
    let mut examined = 0u64;
    for x in cat.objects() {
        if !probe.feasible_apex(x) {
            continue;
        }
        examined += probe.paired_count(x);
        budget.candidates(examined)?;
        found.extend(
            paired_spans_at(cat, c, x)
                .into_iter()
                .filter(|&s| probe.accepts(s)),
        );
    }
    found.sort_unstable_by_key(|s| s.key(cat));
    Ok((found, examined))
}

/// Runs `f` over `items` in parallel chunks, returning outcomes in input
/// order up to and including the first one for which `stop` holds.
pub(crate) fn scan_until<T, R, F, S>(items: &[T], f: F, stop: S) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync,
    S: Fn(&R) -> bool,
{
    let mut out = Vec::new();
    for chunk in items.chunks(SCAN_CHUNK) {
        let results: Vec<Result<R>> = chunk.par_iter().map(&f).collect();
        for r in results {
            let r = r?;
            let halt = stop(&r);
            out.push(r);
            if halt {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

enum CospanOutcome {
    Unique { count: usize, canonical: Span },
    Missing,
    NotIsomorphic { first: Span, other: Span },
}

/// True iff every cospan has a pullback and all pullbacks of each cospan are
/// span-isomorphic. Stops at the first failing cospan in enumeration order.
pub fn has_pullbacks(cat: &FiniteCategory, budget: &Budget) -> Result<CheckReport> {
    let cospans = enumerate_cospans(cat, budget)?;
    let outcomes = scan_until(
        &cospans,
        |&c| {
            let (pbs, examined) = search_pullbacks(cat, c, budget)?;
            let outcome = match pbs.first() {
                None => CospanOutcome::Missing,
                Some(&first) => {
                    let canonical = canonicalize(cat, first);
                    match pbs.iter().find(|&&p| canonicalize(cat, p) != canonical) {
                        Some(&other) => CospanOutcome::NotIsomorphic { first, other },
                        None => CospanOutcome::Unique {
                            count: pbs.len(),
                            canonical,
                        },
                    }
                }
            };
            Ok((outcome, examined))
        },
        |(o, _)| !matches!(o, CospanOutcome::Unique { .. }),
    )?;

    let mut report = CheckReport::new("has-pullbacks", cat.name());
    report.set("cospans_total", cospans.len() as u64);
    report.set("cospans_examined", outcomes.len() as u64);
    for (c, (outcome, examined)) in cospans.iter().zip(&outcomes) {
        report.bump("candidate_spans", *examined);
        match outcome {
            CospanOutcome::Unique { count, canonical } => {
                report.bump("pullbacks_found", *count as u64);
                report.witness(
                    Witness::new(format!("{count} pullback(s), all span-isomorphic"))
                        .with_cospan(cat, *c)
                        .with_span(cat, *canonical),
                );
            }
            CospanOutcome::Missing => report.fail(
                Witness::new("cospan has no pullback")
                    .with_cospan(cat, *c)
                    .with_count(0),
            ),
            CospanOutcome::NotIsomorphic { first, other } => report.fail(
                Witness::new("two pullbacks of the cospan are not span-isomorphic")
                    .with_cospan(cat, *c)
                    .with_span(cat, *first)
                    .with_span(cat, *other),
            ),
        }
    }
    Ok(report)
}

/// Checks that `F(S)` is a pullback of `F(C)` for every pullback `S` of every
/// cospan `C` of the source. Cospans without pullbacks are vacuous and are
/// tallied under `vacuous_cospans`.
pub fn preserves_pullbacks(f: &Functor, budget: &Budget) -> Result<CheckReport> {
    let src = f.source();
    let tgt = f.target();
    let cospans = enumerate_cospans(src, budget)?;
    // (pullback count, first failing pullback)
    let outcomes = scan_until(
        &cospans,
        |&c| {
            let pbs = find_pullbacks(src, c, budget)?;
            let image = c.image(f);
            let probe = PullbackProbe::new(tgt, image);
            let bad = pbs.iter().copied().find(|s| !probe.accepts(s.image(f)));
            Ok((pbs.len(), bad))
        },
        |(_, bad)| bad.is_some(),
    )?;

    let mut report = CheckReport::new("preserves-pullbacks", f.name());
    report.set("cospans_total", cospans.len() as u64);
    report.set("cospans_examined", outcomes.len() as u64);
    report.set("vacuous_cospans", 0);
    for (c, (count, bad)) in cospans.iter().zip(&outcomes) {
        report.bump("pullbacks_checked", *count as u64);
        if *count == 0 {
            report.bump("vacuous_cospans", 1);
        }
        if let Some(s) = bad {
            let img = s.image(f);
            let detail = is_pullback(tgt, img, c.image(f), budget)?;
            let mut w = Witness::new(format!(
                "image of pullback ({}, {}) is not a pullback of the image cospan in `{}`",
                src.mor_name(s.left),
                src.mor_name(s.right),
                tgt.name()
            ))
            .with_cospan(src, *c)
            .with_span(src, *s)
            .with_span(tgt, img);
            if let Some(ce) = detail.counterexample {
                w.spans.extend(ce.spans.into_iter().skip(1));
                w.morphism_count = ce.morphism_count;
            }
            report.fail(w);
        } else if *count > 0 {
            report.witness(
                Witness::new(format!("{count} pullback(s) map to pullbacks"))
                    .with_cospan(src, *c),
            );
        }
    }
    Ok(report)
}
