//! Spans, cospans, pairing, span morphisms and canonical representatives of
//! span-isomorphism classes.
//!
//! A span `S = (s_L, s_R)` has apex `S_A = src(s_L) = src(s_R)` and feet
//! `S_L = tgt(s_L)`, `S_R = tgt(s_R)`. A cospan `C = (c_L, c_R)` has apex
//! `C_A = tgt(c_L) = tgt(c_R)` and feet `C_L`, `C_R`.


use serde::Serialize;

use crate::category::{FiniteCategory, Functor, MorId, ObjId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Span {
    pub left: MorId,
    pub right: MorId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cospan {
    pub left: MorId,
    pub right: MorId,
}

impl Span {
    pub fn new(cat: &FiniteCategory, left: MorId, right: MorId) -> Result<Self> {
        if !cat.contains_morphism(left) || !cat.contains_morphism(right) {
            return Err(Error::DanglingReference("span leg out of range".into()));
        }
        if cat.src(left) != cat.src(right) {
            return Err(Error::NotASpan(format!(
                "({}, {})",
                cat.mor_name(left),
                cat.mor_name(right)
            )));
        }
        Ok(Span { left, right })
    }

    pub fn by_names(cat: &FiniteCategory, left: &str, right: &str) -> Result<Self> {
        Span::new(cat, cat.resolve_morphism(left)?, cat.resolve_morphism(right)?)
    }

    /// `(id_x, id_x)`.
    pub fn identity(cat: &FiniteCategory, x: ObjId) -> Self {
        let id = cat.identity(x);
        Span { left: id, right: id }
    }

    #[inline]
    pub fn apex(&self, cat: &FiniteCategory) -> ObjId {
        cat.src(self.left)
    }

    #[inline]
    pub fn left_foot(&self, cat: &FiniteCategory) -> ObjId {
        cat.tgt(self.left)
    }

    #[inline]
    pub fn right_foot(&self, cat: &FiniteCategory) -> ObjId {
        cat.tgt(self.right)
    }

    pub fn feet(&self, cat: &FiniteCategory) -> (ObjId, ObjId) {
        (self.left_foot(cat), self.right_foot(cat))
    }

    /// Ordering key for canonical representatives: (apex, left, right).
    #[inline]
    pub fn key(&self, cat: &FiniteCategory) -> (ObjId, MorId, MorId) {
        (self.apex(cat), self.left, self.right)
    }

    /// `(s_L ∘ φ, s_R ∘ φ)` for `φ` into the apex.
    #[inline]
    pub fn precompose(&self, cat: &FiniteCategory, phi: MorId) -> Span {
        Span {
            left: cat.compose_unchecked(phi, self.left),
            right: cat.compose_unchecked(phi, self.right),
        }
    }

    /// Image `F(S) = (F(s_L), F(s_R))`.
    pub fn image(&self, f: &Functor) -> Span {
        Span {
            left: f.apply(self.left),
            right: f.apply(self.right),
        }
    }
}

impl Cospan {
    pub fn new(cat: &FiniteCategory, left: MorId, right: MorId) -> Result<Self> {
        if !cat.contains_morphism(left) || !cat.contains_morphism(right) {
            return Err(Error::DanglingReference("cospan leg out of range".into()));
        }
        if cat.tgt(left) != cat.tgt(right) {
            return Err(Error::NotACospan(format!(
                "({}, {})",
                cat.mor_name(left),
                cat.mor_name(right)
            )));
        }
        Ok(Cospan { left, right })
    }

    pub fn by_names(cat: &FiniteCategory, left: &str, right: &str) -> Result<Self> {
        Cospan::new(cat, cat.resolve_morphism(left)?, cat.resolve_morphism(right)?)
    }

    #[inline]
    pub fn apex(&self, cat: &FiniteCategory) -> ObjId {
        cat.tgt(self.left)
    }

    #[inline]
    pub fn left_foot(&self, cat: &FiniteCategory) -> ObjId {
        cat.src(self.left)
    }

    #[inline]
    pub fn right_foot(&self, cat: &FiniteCategory) -> ObjId {
        cat.src(self.right)
    }

    pub fn image(&self, f: &Functor) -> Cospan {
        Cospan {
            left: f.apply(self.left),
            right: f.apply(self.right),
        }
    }
}

/// A span-isomorphism class, held by its canonical representative.
///
/// As a morphism of a span category the class goes from its right foot
/// (source) to its left foot (target).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SpanClass {
    pub representative: Span,
    /// `(S_L, S_R)`.
    pub feet: (ObjId, ObjId),
}

impl SpanClass {
    pub fn of(cat: &FiniteCategory, span: Span) -> Self {
        let representative = canonicalize(cat, span);
        SpanClass {
            representative,
            feet: representative.feet(cat),
        }
    }

    /// Source in the span category: the right foot.
    pub fn source(&self) -> ObjId {
        self.feet.1
    }

    /// Target in the span category: the left foot.
    pub fn target(&self) -> ObjId {
        self.feet.0
    }
}

/// `S_L = C_L`, `S_R = C_R` and `c_L ∘ s_L = c_R ∘ s_R`.
pub fn is_paired(cat: &FiniteCategory, s: Span, c: Cospan) -> bool {
    s.left_foot(cat) == c.left_foot(cat)
        && s.right_foot(cat) == c.right_foot(cat)
        && cat.compose_unchecked(s.left, c.left) == cat.compose_unchecked(s.right, c.right)
}

fn check_feet(cat: &FiniteCategory, s: Span, q: Span) -> Result<()> {
    if s.feet(cat) != q.feet(cat) {
        return Err(Error::FeetMismatch(format!(
            "({}, {}) has feet ({}, {}), ({}, {}) has feet ({}, {})",
            cat.mor_name(s.left),
            cat.mor_name(s.right),
            cat.obj_name(s.left_foot(cat)),
            cat.obj_name(s.right_foot(cat)),
            cat.mor_name(q.left),
            cat.mor_name(q.right),
            cat.obj_name(q.left_foot(cat)),
            cat.obj_name(q.right_foot(cat)),
        )));
    }
    Ok(())
}

#[inline]
fn is_span_morphism_unchecked(cat: &FiniteCategory, phi: MorId, s: Span, q: Span) -> bool {
    cat.compose_unchecked(phi, q.left) == s.left && cat.compose_unchecked(phi, q.right) == s.right
}

/// All `Φ : S_A → Q_A` with `s_L = q_L ∘ Φ` and `s_R = q_R ∘ Φ`, in MorId order.
pub fn span_morphisms(cat: &FiniteCategory, s: Span, q: Span) -> Result<Vec<MorId>> {
    check_feet(cat, s, q)?;
    Ok(cat
        .hom(s.apex(cat), q.apex(cat))
        .iter()
        .copied()
        .filter(|&phi| is_span_morphism_unchecked(cat, phi, s, q))
        .collect())
}

pub fn count_span_morphisms(cat: &FiniteCategory, s: Span, q: Span) -> Result<usize> {
    check_feet(cat, s, q)?;
    Ok(cat
        .hom(s.apex(cat), q.apex(cat))
        .iter()
        .filter(|&&phi| is_span_morphism_unchecked(cat, phi, s, q))
        .count())
}

pub fn is_span_morphism(cat: &FiniteCategory, phi: MorId, s: Span, q: Span) -> Result<bool> {
    check_feet(cat, s, q)?;
    Ok(cat.src(phi) == s.apex(cat)
        && cat.tgt(phi) == q.apex(cat)
        && is_span_morphism_unchecked(cat, phi, s, q))
}

pub fn is_span_isomorphism(cat: &FiniteCategory, phi: MorId, s: Span, q: Span) -> Result<bool> {
    Ok(is_span_morphism(cat, phi, s, q)? && cat.is_iso(phi))
}

/// Every member of the isomorphism class of `s`: `(s_L ∘ ψ, s_R ∘ ψ)` for
/// each isomorphism `ψ` into the apex, deduplicated and sorted by key.
pub fn class_members(cat: &FiniteCategory, s: Span) -> Vec<Span> {
    let mut members: Vec<Span> = cat
        .isos_into(s.apex(cat))
        .iter()
        .map(|&psi| s.precompose(cat, psi))
        .collect();
    members.sort_unstable_by_key(|m| m.key(cat));
    members.dedup();
    members
}

/// Least member of the class of `s` under the (apex, left, right) key.
pub fn canonicalize(cat: &FiniteCategory, s: Span) -> Span {
    cat.isos_into(s.apex(cat))
        .iter()
        .map(|&psi| s.precompose(cat, psi))
        .min_by_key(|m| m.key(cat))
        .unwrap_or(s)
}

pub fn same_class(cat: &FiniteCategory, s: Span, q: Span) -> bool {
    s.feet(cat) == q.feet(cat) && canonicalize(cat, s) == canonicalize(cat, q)
}

/// Every span of the category, ordered by (apex, left, right).
pub fn all_spans(cat: &FiniteCategory) -> impl Iterator<Item = Span> + '_ {
    cat.objects().flat_map(move |a| {
        let out = cat.outgoing(a);
        out.iter()
            .flat_map(move |&l| out.iter().map(move |&r| Span { left: l, right: r }))
    })
}

/// Counts span morphisms into a fixed span `Q` from any span with apex `X`,
/// by tabulating `Φ ↦ (q_L ∘ Φ, q_R ∘ Φ)` over `hom(X, Q_A)` once.
pub struct SpanMorphismIndex {
    images: Vec<(MorId, MorId)>,
}

impl SpanMorphismIndex {
    pub fn new(cat: &FiniteCategory, q: Span, from: ObjId) -> Self {
        let mut images: Vec<(MorId, MorId)> = cat
            .hom(from, q.apex(cat))
            .iter()
            .map(|&phi| {
                (
                    cat.compose_unchecked(phi, q.left),
                    cat.compose_unchecked(phi, q.right),
                )
            })
            .collect();
        images.sort_unstable();
        SpanMorphismIndex { images }
    }

    /// Number of span morphisms from `s` (whose apex must be the index's `from`).
    pub fn count(&self, s: Span) -> u32 {
        let key = (s.left, s.right);
        let start = self.images.partition_point(|&k| k < key);
        self.images[start..].iter().take_while(|&&k| k == key).count() as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::fixtures;

    #[test]
    fn z2_classes() {
        let z2 = fixtures::z2();
        let e = z2.resolve_morphism("e").unwrap();
        let s = z2.resolve_morphism("s").unwrap();
        let ee = Span::new(&z2, e, e).unwrap();
        let ss = Span::new(&z2, s, s).unwrap();
        assert_eq!(span_morphisms(&z2, ee, ss).unwrap(), vec![s]);
        assert!(is_span_isomorphism(&z2, s, ee, ss).unwrap());
        assert_eq!(canonicalize(&z2, ss), ee);
        assert!(same_class(&z2, ee, ss));
        let es = Span::new(&z2, e, s).unwrap();
        assert!(!same_class(&z2, ee, es));
        assert_eq!(class_members(&z2, es).len(), 2);
    }

    #[test]
    fn identity_is_always_a_span_morphism() {
        let cat = fixtures::b2();
        for s in all_spans(&cat) {
            let ms = span_morphisms(&cat, s, s).unwrap();
            assert!(ms.contains(&cat.identity(s.apex(&cat))));
        }
    }

    #[test]
    fn feet_mismatch_is_an_error() {
        let cat = fixtures::b2();
        let bot = cat.resolve_object("bot").unwrap();
        let a = cat.resolve_object("a").unwrap();
        let s = Span::identity(&cat, bot);
        let q = Span::identity(&cat, a);
        assert!(matches!(span_morphisms(&cat, s, q), Err(Error::FeetMismatch(_))));
        assert!(!same_class(&cat, s, q));
    }

    #[test]
    fn paired_requires_matching_feet() {
        let cat = fixtures::finsurj12();
        let f = cat.resolve_morphism("f2to1:00").unwrap();
        let id2 = cat.resolve_morphism("f2to2:01").unwrap();
        let id1 = cat.resolve_morphism("f1to1:0").unwrap();
        let c = Cospan::new(&cat, f, f).unwrap();
        assert!(is_paired(&cat, Span::new(&cat, id2, id2).unwrap(), c));
        let wrong = Cospan::new(&cat, id1, id1).unwrap();
        assert!(!is_paired(&cat, Span::new(&cat, id2, id2).unwrap(), wrong));
    }

    #[test]
    fn non_invertible_span_morphism_is_not_an_iso() {
        let cat = fixtures::finset04();
        let f = cat.resolve_morphism("f2to1:00").unwrap();
        let id1 = cat.resolve_morphism("f1to1:0").unwrap();
        let s = Span::new(&cat, f, f).unwrap();
        let q = Span::new(&cat, id1, id1).unwrap();
        assert!(is_span_morphism(&cat, f, s, q).unwrap());
        assert!(!is_span_isomorphism(&cat, f, s, q).unwrap());
    }

    #[test]
    fn empty_apex_has_exactly_one_morphism() {
        let cat = fixtures::finset04();
        let s0 = cat.resolve_object("S0").unwrap();
        let s2 = cat.resolve_object("S2").unwrap();
        let s3 = cat.resolve_object("S3").unwrap();
        let e = cat.hom(s0, s2)[0];
        let s = Span::new(&cat, e, e).unwrap();
        for &l in cat.hom(s3, s2) {
            for &r in cat.hom(s3, s2).iter().take(3) {
                let q = Span::new(&cat, l, r).unwrap();
                assert_eq!(span_morphisms(&cat, s, q).unwrap().len(), 1);
            }
        }
    }

    #[test]
    fn canonical_form_prefers_identity_left_leg() {
        let cat = fixtures::finset04();
        let swap = cat.resolve_morphism("f2to2:10").unwrap();
        let id = cat.resolve_morphism("f2to2:01").unwrap();
        // (swap, id) ≅ (id, swap) via the swap automorphism.
        let s = Span::new(&cat, swap, id).unwrap();
        assert_eq!(canonicalize(&cat, s), Span::new(&cat, id, swap).unwrap());
        assert_eq!(canonicalize(&cat, Span::new(&cat, swap, swap).unwrap()).left, id);
    }

    #[test]
    fn morphism_index_matches_scan() {
        let cat = fixtures::finset04();
        let s2 = cat.resolve_object("S2").unwrap();
        let s3 = cat.resolve_object("S3").unwrap();
        let spans: Vec<Span> = all_spans(&cat)
            .filter(|s| s.feet(&cat) == (s2, s2))
            .collect();
        for &q in spans.iter().filter(|q| q.apex(&cat) == s3).take(20) {
            for x in cat.objects() {
                let idx = SpanMorphismIndex::new(&cat, q, x);
                for &s in spans.iter().filter(|s| s.apex(&cat) == x) {
                    assert_eq!(
                        idx.count(s) as usize,
                        count_span_morphisms(&cat, s, q).unwrap()
                    );
                }
            }
        }
    }
}
