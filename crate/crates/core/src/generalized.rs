//! F-pullbacks, span tightness and the span category `Span(C, F)`.
//!
//! For a functor `F: C → D`, an F-pullback of a cospan `C` is a span paired
//! with `C` whose image under `F` is a pullback of `F(C)`. Objects of
//! `Span(C, F)` are the objects of `C`; a morphism `Y → X` is an isomorphism
//! class of spans with left foot `X` and right foot `Y`. `[S]∘[Q]` (defined
//! when `S_R = Q_L`) is the class of `(s_L∘p_L, q_R∘p_R)` for any F-pullback
//! `P` of `(s_R, q_L)`; span tightness makes that choice irrelevant.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::budget::Budget;
use crate::category::{FiniteCategory, Functor, MorId, ObjId};
use crate::error::{Error, Result};
use crate::pullback::{
    enumerate_cospans, has_pullbacks, is_pullback, paired_count_at, paired_spans,
    paired_spans_at, scan_until, PullbackProbe,
};
use crate::report::{CheckReport, Witness};
use crate::span::{
    all_spans, canonicalize, class_members, is_paired, is_span_isomorphism, span_morphisms,
    Cospan, Span, SpanClass,
};

/// Every F-pullback of `c`, ordered by (apex, left, right). Possibly empty.
pub fn find_f_pullbacks(f: &Functor, c: Cospan, budget: &Budget) -> Result<Vec<Span>> {
    Ok(search_f_pullbacks(f, c, budget)?.0)
}

fn search_f_pullbacks(f: &Functor, c: Cospan, budget: &Budget) -> Result<(Vec<Span>, u64)> {
    let src = f.source();
    let probe = PullbackProbe::new(f.target(), c.image(f));
    let mut found = Vec::new();
    let mut examined = 0u64;
    for x in src.objects() {
        if !probe.feasible_apex(f.apply_obj(x)) {
            continue;
        }
        examined += paired_count_at(src, c, x);
        budget.candidates(examined)?;
        found.extend(
            paired_spans_at(src, c, x)
                .into_iter()
                .filter(|s| probe.accepts(s.image(f))),
        );
    }
    found.sort_unstable_by_key(|s| s.key(src));
    Ok((found, examined))
}

fn check_composable(cat: &FiniteCategory, s: Span, q: Span) -> Result<()> {
    if s.right_foot(cat) != q.left_foot(cat) {
        return Err(Error::FeetMismatch(format!(
            "right foot `{}` of the first span is not the left foot `{}` of the second",
            cat.obj_name(s.right_foot(cat)),
            cat.obj_name(q.left_foot(cat))
        )));
    }
    Ok(())
}

/// Composite of `S` and `Q` along a span `P` paired with `(s_R, q_L)`:
/// `(s_L∘p_L, q_R∘p_R)`.
pub fn compose_along(cat: &FiniteCategory, s: Span, p: Span, q: Span) -> Result<Span> {
    check_composable(cat, s, q)?;
    if p.left_foot(cat) != s.apex(cat) || p.right_foot(cat) != q.apex(cat) {
        return Err(Error::FeetMismatch(format!(
            "P = ({}, {}) must have feet ({}, {})",
            cat.mor_name(p.left),
            cat.mor_name(p.right),
            cat.obj_name(s.apex(cat)),
            cat.obj_name(q.apex(cat))
        )));
    }
    let c = Cospan {
        left: s.right,
        right: q.left,
    };
    if !is_paired(cat, p, c) {
        return Err(Error::NotPaired(format!(
            "({}, {}) with ({}, {})",
            cat.mor_name(p.left),
            cat.mor_name(p.right),
            cat.mor_name(c.left),
            cat.mor_name(c.right)
        )));
    }
    Ok(Span {
        left: cat.compose_unchecked(p.left, s.left),
        right: cat.compose_unchecked(p.right, q.right),
    })
}

enum TightFailure {
    Missing,
    /// `F(S) → F(Q)` should be unique since both are pullbacks of `F(C)`.
    Downstairs { s: Span, q: Span, count: usize },
    NoLift { s: Span, q: Span, phi: MorId },
}

struct TightAt {
    f_pullbacks: usize,
    pairs: u64,
    examined: u64,
    non_unique: Vec<(Span, Span, usize)>,
    failure: Option<TightFailure>,
}

fn tightness_at(f: &Functor, c: Cospan, budget: &Budget) -> Result<TightAt> {
    let (src, tgt) = (f.source(), f.target());
    let (pbs, examined) = search_f_pullbacks(f, c, budget)?;
    let mut out = TightAt {
        f_pullbacks: pbs.len(),
        pairs: 0,
        examined,
        non_unique: Vec::new(),
        failure: None,
    };
    if pbs.is_empty() {
        out.failure = Some(TightFailure::Missing);
        return Ok(out);
    }
    for &s in &pbs {
        for &q in &pbs {
            out.pairs += 1;
            let phis = span_morphisms(tgt, s.image(f), q.image(f))?;
            if phis.len() != 1 {
                out.failure = Some(TightFailure::Downstairs {
                    s,
                    q,
                    count: phis.len(),
                });
                return Ok(out);
            }
            let phi = phis[0];
            let mut lifts = 0;
            for &psi in src.hom(s.apex(src), q.apex(src)) {
                if f.apply(psi) == phi && is_span_isomorphism(src, psi, s, q)? {
                    lifts += 1;
                }
            }
            match lifts {
                0 => {
                    out.failure = Some(TightFailure::NoLift { s, q, phi });
                    return Ok(out);
                }
                1 => {}
                n => out.non_unique.push((s, q, n)),
            }
        }
    }
    Ok(out)
}

/// Decides span tightness: every cospan has an F-pullback, and for any two
/// F-pullbacks `S`, `Q` of the same cospan the unique isomorphism
/// `F(S) ≅ F(Q)` over `F(C)` is the image of a span isomorphism `S ≅ Q`.
///
/// Every cospan is examined so the stats give the full picture; lifts that
/// exist but are not unique are tallied, not treated as failures.
pub fn is_span_tight(f: &Functor, budget: &Budget) -> Result<CheckReport> {
    let (src, tgt) = (f.source(), f.target());
    let cospans = enumerate_cospans(src, budget)?;
    let outcomes = scan_until(&cospans, |&c| tightness_at(f, c, budget), |_| false)?;

    let mut report = CheckReport::new("span-tight", f.name());
    for key in [
        "cospans_without_f_pullback",
        "downstairs_failures",
        "lift_failures",
        "non_unique_lifts",
    ] {
        report.set(key, 0);
    }
    report.set("cospans_total", cospans.len() as u64);
    for (&c, at) in cospans.iter().zip(&outcomes) {
        report.bump("candidate_spans", at.examined);
        report.bump("f_pullbacks", at.f_pullbacks as u64);
        report.bump("pairs_checked", at.pairs);
        for &(s, q, n) in &at.non_unique {
            report.bump("non_unique_lifts", 1);
            report.witness(
                Witness::new(format!("{n} span isomorphisms lift the downstairs isomorphism"))
                    .with_cospan(src, c)
                    .with_span(src, s)
                    .with_span(src, q)
                    .with_count(n as u64),
            );
        }
        let w = match &at.failure {
            None => continue,
            Some(TightFailure::Missing) => {
                report.bump("cospans_without_f_pullback", 1);
                Witness::new("cospan has no F-pullback")
                    .with_cospan(src, c)
                    .with_count(0)
            }
            Some(TightFailure::Downstairs { s, q, count }) => {
                report.bump("downstairs_failures", 1);
                Witness::new(format!(
                    "images of two F-pullbacks admit {count} span morphisms (expected 1)"
                ))
                .with_cospan(src, c)
                .with_span(src, *s)
                .with_span(src, *q)
                .with_count(*count as u64)
            }
            Some(TightFailure::NoLift { s, q, phi }) => {
                report.bump("lift_failures", 1);
                Witness::new(format!(
                    "the isomorphism `{}` between the images has no lift to a span isomorphism",
                    tgt.mor_name(*phi)
                ))
                .with_cospan(src, c)
                .with_span(src, *s)
                .with_span(src, *q)
                .with_count(0)
            }
        };
        report.fail(w.clone());
        report.witness(w);
    }
    Ok(report)
}

/// Index of a class in [`SpanCategory::classes`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassId(pub u32);

impl ClassId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// `Span(C, F)` with every class enumerated up front. Composites are
/// computed on demand from the first F-pullback in canonical order; the
/// F-pullbacks of each cospan are cached.
pub struct SpanCategory {
    functor: Functor,
    budget: Budget,
    classes: Vec<SpanClass>,
    members: Vec<Vec<Span>>,
    index: HashMap<Span, ClassId>,
    identities: Vec<ClassId>,
    tight: Option<bool>,
    f_pullbacks: RwLock<HashMap<Cospan, Arc<Vec<Span>>>>,
}

impl std::fmt::Debug for SpanCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpanCategory")
            .field("functor", &self.functor.name())
            .field("classes", &self.classes.len())
            .field("tight", &self.tight)
            .finish()
    }
}

impl SpanCategory {
    /// Builds the span category without checking span tightness. Composition
    /// may then depend on the chosen F-pullback, or be undefined.
    pub fn build_unchecked(f: Functor, budget: &Budget) -> Result<SpanCategory> {
        Self::assemble(f, budget, None)
    }

    fn assemble(f: Functor, budget: &Budget, tight: Option<bool>) -> Result<SpanCategory> {
        let cat = f.source();
        let total: u64 = cat
            .objects()
            .map(|a| (cat.outgoing(a).len() as u64).pow(2))
            .sum();
        budget.candidates(total)?;
        let mut classes = Vec::new();
        let mut members = Vec::new();
        let mut index = HashMap::new();
        for s in all_spans(cat) {
            if canonicalize(cat, s) == s {
                index.insert(s, ClassId(classes.len() as u32));
                classes.push(SpanClass {
                    representative: s,
                    feet: s.feet(cat),
                });
                members.push(class_members(cat, s));
            }
        }
        let identities = cat
            .objects()
            .map(|x| index[&canonicalize(cat, Span::identity(cat, x))])
            .collect();
        Ok(SpanCategory {
            functor: f,
            budget: *budget,
            classes,
            members,
            index,
            identities,
            tight,
            f_pullbacks: RwLock::new(HashMap::new()),
        })
    }

    pub fn functor(&self) -> &Functor {
        &self.functor
    }

    pub fn base(&self) -> &FiniteCategory {
        self.functor.source()
    }

    /// `Some(true)` when built by [`build_span_category`], `None` when unchecked.
    pub fn tight(&self) -> Option<bool> {
        self.tight
    }

    pub fn classes(&self) -> &[SpanClass] {
        &self.classes
    }

    pub fn class_ids(&self) -> impl ExactSizeIterator<Item = ClassId> {
        (0..self.classes.len() as u32).map(ClassId)
    }

    pub fn class(&self, id: ClassId) -> SpanClass {
        self.classes[id.index()]
    }

    pub fn members(&self, id: ClassId) -> &[Span] {
        &self.members[id.index()]
    }

    /// Class of an arbitrary span of the base category.
    pub fn class_of(&self, s: Span) -> ClassId {
        self.index[&canonicalize(self.base(), s)]
    }

    pub fn id_of(&self, class: &SpanClass) -> Option<ClassId> {
        self.index.get(&class.representative).copied()
    }

    /// `[(id_x, id_x)]`.
    pub fn identity(&self, x: ObjId) -> ClassId {
        self.identities[x.index()]
    }

    /// Pairs `(a, b)` with `[a]∘[b]` defined, i.e. `a.source == b.target`.
    pub fn composable_pairs(&self) -> Vec<(ClassId, ClassId)> {
        let mut by_target: HashMap<ObjId, Vec<ClassId>> = HashMap::new();
        for id in self.class_ids() {
            by_target.entry(self.class(id).target()).or_default().push(id);
        }
        let mut out = Vec::new();
        for a in self.class_ids() {
            if let Some(bs) = by_target.get(&self.class(a).source()) {
                out.extend(bs.iter().map(|&b| (a, b)));
            }
        }
        out
    }

    /// Cached [`find_f_pullbacks`].
    pub fn f_pullbacks(&self, c: Cospan) -> Result<Arc<Vec<Span>>> {
        if let Some(hit) = self.f_pullbacks.read().unwrap().get(&c) {
            return Ok(hit.clone());
        }
        let found = Arc::new(find_f_pullbacks(&self.functor, c, &self.budget)?);
        self.f_pullbacks
            .write()
            .unwrap()
            .insert(c, found.clone());
        Ok(found)
    }

    /// Composite span of `S` after `Q` along the first F-pullback of `(s_R, q_L)`.
    pub fn compose_spans(&self, s: Span, q: Span) -> Result<Span> {
        let cat = self.base();
        let c = Cospan {
            left: s.right,
            right: q.left,
        };
        check_composable(cat, s, q)?;
        let pbs = self.f_pullbacks(c)?;
        let p = pbs.first().ok_or_else(|| Error::NoFPullback {
            left: cat.mor_name(c.left).to_owned(),
            right: cat.mor_name(c.right).to_owned(),
        })?;
        compose_along(cat, s, *p, q)
    }

    /// `[a]∘[b]`, defined when the source of `a` is the target of `b`.
    pub fn compose(&self, a: ClassId, b: ClassId) -> Result<ClassId> {
        let s = self.class(a).representative;
        let q = self.class(b).representative;
        Ok(self.class_of(self.compose_spans(s, q)?))
    }

    /// [`Self::compose`] on classes given by value.
    pub fn span_compose(&self, a: &SpanClass, b: &SpanClass) -> Result<SpanClass> {
        let s = self.compose_spans(a.representative, b.representative)?;
        Ok(SpanClass::of(self.base(), s))
    }

    pub fn identity_class(&self, x: ObjId) -> SpanClass {
        self.class(self.identity(x))
    }
}

/// Builds `Span(C, F)`, refusing functors that are not span tight.
pub fn build_span_category(f: Functor, budget: &Budget) -> Result<SpanCategory> {
    let report = is_span_tight(&f, budget)?;
    if !report.verdict {
        return Err(Error::NotSpanTight(Box::new(report)));
    }
    SpanCategory::assemble(f, budget, Some(true))
}

/// Compares `Span(C, Id)` with the classical span category of a category
/// with pullbacks: for each composable pair, the composite along the first
/// pullback found by the literal definition must land in the same class as
/// the composite along the first F-pullback.
pub fn classic_equivalence(cat: Arc<FiniteCategory>, budget: &Budget) -> Result<CheckReport> {
    let hp = has_pullbacks(&cat, budget)?;
    if !hp.verdict {
        return Err(Error::PreconditionFailed(format!(
            "`{}` does not have all pullbacks",
            cat.name()
        )));
    }
    let sc = build_span_category(Functor::identity(cat.clone()), budget)?;
    let pairs = sc.composable_pairs();
    let outcomes = scan_until(
        &pairs,
        |&(a, b)| {
            let (s, q) = (sc.class(a).representative, sc.class(b).representative);
            let c = Cospan {
                left: s.right,
                right: q.left,
            };
            let mut classic = None;
            for p in paired_spans(&cat, c, budget)? {
                if is_pullback(&cat, p, c, budget)?.verdict {
                    classic = Some(sc.class_of(compose_along(&cat, s, p, q)?));
                    break;
                }
            }
            Ok((classic, sc.compose(a, b)?))
        },
        |(classic, generalized)| *classic != Some(*generalized),
    )?;
    let mut report = CheckReport::new("classic-equiv", cat.name());
    report.set("classes", sc.classes().len() as u64);
    report.set("composable_pairs", pairs.len() as u64);
    report.set("pairs_checked", outcomes.len() as u64);
    for (&(a, b), (classic, generalized)) in pairs.iter().zip(&outcomes) {
        if *classic != Some(*generalized) {
            let mut w = Witness::new("classical and generalized composites differ")
                .with_span(&cat, sc.class(a).representative)
                .with_span(&cat, sc.class(b).representative)
                .with_span(&cat, sc.class(*generalized).representative);
            if let Some(k) = classic {
                w = w.with_span(&cat, sc.class(*k).representative);
            }
            report.fail(w);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::fixtures;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn identity_functor_f_pullbacks_are_pullbacks() {
        let cat = Arc::new(fixtures::b2());
        let id = Functor::identity(cat.clone());
        for c in enumerate_cospans(&cat, &b()).unwrap() {
            assert_eq!(
                find_f_pullbacks(&id, c, &b()).unwrap(),
                crate::pullback::find_pullbacks(&cat, c, &b()).unwrap()
            );
        }
    }

    #[test]
    fn incl_has_no_f_pullback_for_the_collapsing_cospan() {
        let incl = fixtures::incl();
        let cat = incl.source();
        let f = cat.resolve_morphism("f2to1:00").unwrap();
        let c = Cospan { left: f, right: f };
        assert!(find_f_pullbacks(&incl, c, &b()).unwrap().is_empty());
        let report = is_span_tight(&incl, &b()).unwrap();
        assert!(!report.verdict);
        assert_eq!(report.stat("cospans_without_f_pullback"), 1);
        assert_eq!(report.stat("lift_failures"), 0);
        let ce = report.counterexample.unwrap();
        assert_eq!(ce.cospan.unwrap().legs(), ("f2to1:00", "f2to1:00"));
    }

    #[test]
    fn negative_tightness_fixture() {
        let f = fixtures::arrow_to_terminal();
        let report = is_span_tight(&f, &b()).unwrap();
        assert!(!report.verdict);
        assert_eq!(report.stat("cospans_without_f_pullback"), 0);
        assert!(report.stat("lift_failures") > 0);
        let ce = report.counterexample.unwrap();
        assert_eq!(ce.cospan.unwrap().legs(), ("id_y", "id_y"));
        assert!(matches!(
            build_span_category(f, &b()),
            Err(Error::NotSpanTight(_))
        ));
    }

    #[test]
    fn discrete_into_iso_is_tight() {
        let report = is_span_tight(&fixtures::discrete_into_iso(), &b()).unwrap();
        assert!(report.verdict, "{report:?}");
    }

    #[test]
    fn compose_along_checks_its_inputs() {
        let cat = fixtures::b2();
        let s = Span::by_names(&cat, "bot_le_a", "bot_le_top").unwrap();
        let q = Span::by_names(&cat, "b_le_top", "b_le_b").unwrap();
        let p = Span::by_names(&cat, "bot_le_bot", "bot_le_b").unwrap();
        let r = compose_along(&cat, s, p, q).unwrap();
        assert_eq!((cat.mor_name(r.left), cat.mor_name(r.right)), ("bot_le_a", "bot_le_b"));
        assert!(matches!(
            compose_along(&cat, q, p, s),
            Err(Error::FeetMismatch(_))
        ));
        let z2 = fixtures::z2();
        let e = Span::by_names(&z2, "e", "e").unwrap();
        let bad = Span::by_names(&z2, "e", "s").unwrap();
        assert!(matches!(compose_along(&z2, e, bad, e), Err(Error::NotPaired(_))));
    }

    #[test]
    fn z2_span_category() {
        let sc = build_span_category(Functor::identity(Arc::new(fixtures::z2())), &b()).unwrap();
        assert_eq!(sc.classes().len(), 2);
        let id = sc.identity(ObjId(0));
        for a in sc.class_ids() {
            assert_eq!(sc.compose(a, id).unwrap(), a);
            assert_eq!(sc.compose(id, a).unwrap(), a);
        }
    }

    #[test]
    fn classic_equivalence_on_fixtures() {
        for cat in [fixtures::z2(), fixtures::b2(), fixtures::terminal()] {
            let r = classic_equivalence(Arc::new(cat), &b()).unwrap();
            assert!(r.verdict, "{r:?}");
        }
        assert!(matches!(
            classic_equivalence(Arc::new(fixtures::finsurj12()), &b()),
            Err(Error::PreconditionFailed(_))
        ));
    }
}
