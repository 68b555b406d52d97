//! Finite categories as validated, immutable composition tables.
//!
//! Objects and morphisms are dense indices assigned in declaration order, so
//! every enumeration in the crate is deterministic. Composition is stored in
//! diagrammatic order: `compose(first, then)` is `then ∘ first` and requires
//! `tgt(first) = src(then)`.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationReport, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MorId(pub u32);

impl ObjId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl MorId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

/// Whether [`FiniteCategory::from_fn`] re-checks associativity over every
/// composable triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssociativityCheck {
    Full,
    /// The table is built from composition of functions or relations, which
    /// is associative by construction.
    Trusted,
}

const NO_MOR: u32 = u32::MAX;

#[derive(Clone)]
pub struct FiniteCategory {
    name: String,
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identity: Vec<MorId>,
    object_index: HashMap<String, ObjId>,
    morphism_index: HashMap<String, MorId>,
    hom: Vec<Vec<MorId>>,
    outgoing: Vec<Vec<MorId>>,
    incoming: Vec<Vec<MorId>>,
    // position of each morphism inside `outgoing[src]`
    out_pos: Vec<u32>,
    // composites of `f` with each `g` in `outgoing[tgt f]`, flattened
    comp_offset: Vec<usize>,
    comp: Vec<u32>,
    inverse: Vec<Option<MorId>>,
    isos_into: Vec<Vec<MorId>>,
}

impl fmt::Debug for FiniteCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteCategory")
            .field("name", &self.name)
            .field("objects", &self.objects.len())
            .field("morphisms", &self.morphisms.len())
            .finish()
    }
}

impl FiniteCategory {
    /// Builds and validates a category whose composition is given by `compose(first, then)`.
    ///
    /// `compose` is queried exactly once per composable pair; returning `None`
    /// reports a missing composite.
    pub fn from_fn<F>(
        name: impl Into<String>,
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identity: Vec<MorId>,
        compose: F,
        assoc: AssociativityCheck,
    ) -> Result<Self>
    where
        F: Fn(MorId, MorId) -> Option<MorId> + Sync,
    {
        let name = name.into();
        let mut report = ValidationReport::new(name.clone());
        let n_obj = objects.len();
        let n_mor = morphisms.len();

        let mut object_index = HashMap::with_capacity(n_obj);
        for (i, o) in objects.iter().enumerate() {
            if object_index.insert(o.clone(), ObjId(i as u32)).is_some() {
                report.push(Violation::DuplicateName {
                    what: "object".into(),
                    name: o.clone(),
                });
            }
        }
        let mut morphism_index = HashMap::with_capacity(n_mor);
        for (i, m) in morphisms.iter().enumerate() {
            if morphism_index.insert(m.name.clone(), MorId(i as u32)).is_some() {
                report.push(Violation::DuplicateName {
                    what: "morphism".into(),
                    name: m.name.clone(),
                });
            }
            for end in [m.src, m.tgt] {
                if end.index() >= n_obj {
                    report.push(Violation::DanglingReference {
                        context: format!("morphism `{}`", m.name),
                        name: end.to_string(),
                    });
                }
            }
        }
        if identity.len() != n_obj {
            report.push(Violation::BadIdentity {
                object: "*".into(),
                detail: format!("{} identities for {} objects", identity.len(), n_obj),
            });
        }
        report.clone().into_result()?;

        for (x, &id) in identity.iter().enumerate() {
            if id.index() >= n_mor {
                report.push(Violation::DanglingReference {
                    context: format!("identity of `{}`", objects[x]),
                    name: id.to_string(),
                });
            } else if morphisms[id.index()].src.index() != x
                || morphisms[id.index()].tgt.index() != x
            {
                report.push(Violation::BadIdentity {
                    object: objects[x].clone(),
                    detail: format!("`{}` is not an endomorphism of it", morphisms[id.index()].name),
                });
            }
        }
        report.clone().into_result()?;

        let mut hom = vec![Vec::new(); n_obj * n_obj];
        let mut outgoing = vec![Vec::new(); n_obj];
        let mut incoming = vec![Vec::new(); n_obj];
        let mut out_pos = vec![0u32; n_mor];
        for (i, m) in morphisms.iter().enumerate() {
            let id = MorId(i as u32);
            hom[m.src.index() * n_obj + m.tgt.index()].push(id);
            out_pos[i] = outgoing[m.src.index()].len() as u32;
            outgoing[m.src.index()].push(id);
            incoming[m.tgt.index()].push(id);
        }

        let mut comp_offset = Vec::with_capacity(n_mor + 1);
        let mut total = 0usize;
        for m in &morphisms {
            comp_offset.push(total);
            total += outgoing[m.tgt.index()].len();
        }
        comp_offset.push(total);

        let rows: Vec<Vec<u32>> = (0..n_mor)
            .into_par_iter()
            .map(|f| {
                let tgt = morphisms[f].tgt.index();
                outgoing[tgt]
                    .iter()
                    .map(|&g| compose(MorId(f as u32), g).map_or(NO_MOR, |h| h.0))
                    .collect()
            })
            .collect();
        let mut comp = Vec::with_capacity(total);
        for row in rows {
            comp.extend(row);
        }

        let mut cat = FiniteCategory {
            name,
            objects,
            morphisms,
            identity,
            object_index,
            morphism_index,
            hom,
            outgoing,
            incoming,
            out_pos,
            comp_offset,
            comp,
            inverse: Vec::new(),
            isos_into: Vec::new(),
        };

        cat.check_table(&mut report);
        report.clone().into_result()?;
        cat.check_identity_laws(&mut report);
        report.clone().into_result()?;
        if assoc == AssociativityCheck::Full {
            cat.check_associativity(&mut report);
            report.into_result()?;
        }
        cat.compute_inverses();
        Ok(cat)
    }

    fn check_table(&self, report: &mut ValidationReport) {
        for (f, m) in self.morphisms.iter().enumerate() {
            let f = MorId(f as u32);
            for &g in &self.outgoing[m.tgt.index()] {
                let raw = self.comp[self.comp_offset[f.index()] + self.out_pos[g.index()] as usize];
                if raw == NO_MOR {
                    report.push(Violation::MissingComposite {
                        first: m.name.clone(),
                        then: self.mor_name(g).to_owned(),
                    });
                } else if raw as usize >= self.morphisms.len() {
                    report.push(Violation::DanglingReference {
                        context: format!("composite of `{}` then `{}`", m.name, self.mor_name(g)),
                        name: format!("#{raw}"),
                    });
                } else {
                    let h = &self.morphisms[raw as usize];
                    if h.src != m.src || h.tgt != self.morphisms[g.index()].tgt {
                        report.push(Violation::BadComposite {
                            first: m.name.clone(),
                            then: self.mor_name(g).to_owned(),
                            equals: h.name.clone(),
                        });
                    }
                }
            }
        }
    }

    fn check_identity_laws(&self, report: &mut ValidationReport) {
        for (f, m) in self.morphisms.iter().enumerate() {
            let f = MorId(f as u32);
            if self.compose_unchecked(self.identity(m.src), f) != f {
                report.push(Violation::BadIdentity {
                    object: self.objects[m.src.index()].clone(),
                    detail: format!("`{}` ∘ id ≠ `{}`", m.name, m.name),
                });
            }
            if self.compose_unchecked(f, self.identity(m.tgt)) != f {
                report.push(Violation::BadIdentity {
                    object: self.objects[m.tgt.index()].clone(),
                    detail: format!("id ∘ `{}` ≠ `{}`", m.name, m.name),
                });
            }
        }
    }

    fn check_associativity(&self, report: &mut ValidationReport) {
        let found: Vec<(MorId, MorId, MorId)> = (0..self.morphisms.len())
            .into_par_iter()
            .flat_map_iter(|f| {
                let f = MorId(f as u32);
                let mut bad = Vec::new();
                for &g in self.outgoing(self.tgt(f)) {
                    let gf = self.compose_unchecked(f, g);
                    for &h in self.outgoing(self.tgt(g)) {
                        let hg = self.compose_unchecked(g, h);
                        if self.compose_unchecked(gf, h) != self.compose_unchecked(f, hg) {
                            bad.push((f, g, h));
                        }
                    }
                }
                bad
            })
            .collect();
        for (f, g, h) in found {
            report.push(Violation::AssociativityViolation {
                first: self.mor_name(f).to_owned(),
                second: self.mor_name(g).to_owned(),
                third: self.mor_name(h).to_owned(),
            });
        }
    }

    fn compute_inverses(&mut self) {
        let inverse: Vec<Option<MorId>> = (0..self.morphisms.len())
            .into_par_iter()
            .map(|f| {
                let f = MorId(f as u32);
                let (a, b) = (self.src(f), self.tgt(f));
                self.hom(b, a).iter().copied().find(|&g| {
                    self.compose_unchecked(f, g) == self.identity(a)
                        && self.compose_unchecked(g, f) == self.identity(b)
                })
            })
            .collect();
        let mut isos_into = vec![Vec::new(); self.objects.len()];
        for (f, inv) in inverse.iter().enumerate() {
            if inv.is_some() {
                isos_into[self.morphisms[f].tgt.index()].push(MorId(f as u32));
            }
        }
        self.inverse = inverse;
        self.isos_into = isos_into;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl ExactSizeIterator<Item = ObjId> + '_ {
        (0..self.objects.len() as u32).map(ObjId)
    }

    pub fn morphisms(&self) -> impl ExactSizeIterator<Item = MorId> + '_ {
        (0..self.morphisms.len() as u32).map(MorId)
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism(&self, m: MorId) -> &Morphism {
        &self.morphisms[m.index()]
    }

    pub fn obj_name(&self, x: ObjId) -> &str {
        &self.objects[x.index()]
    }

    pub fn mor_name(&self, m: MorId) -> &str {
        &self.morphisms[m.index()].name
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.object_index.get(name).copied()
    }

    pub fn morphism_by_name(&self, name: &str) -> Option<MorId> {
        self.morphism_index.get(name).copied()
    }

    pub fn resolve_object(&self, name: &str) -> Result<ObjId> {
        self.object_by_name(name).ok_or_else(|| {
            Error::DanglingReference(format!("no object `{name}` in `{}`", self.name))
        })
    }

    pub fn resolve_morphism(&self, name: &str) -> Result<MorId> {
        self.morphism_by_name(name).ok_or_else(|| {
            Error::DanglingReference(format!("no morphism `{name}` in `{}`", self.name))
        })
    }

    pub fn contains_object(&self, x: ObjId) -> bool {
        x.index() < self.objects.len()
    }

    pub fn contains_morphism(&self, m: MorId) -> bool {
        m.index() < self.morphisms.len()
    }

    #[inline]
    pub fn src(&self, m: MorId) -> ObjId {
        self.morphisms[m.index()].src
    }

    #[inline]
    pub fn tgt(&self, m: MorId) -> ObjId {
        self.morphisms[m.index()].tgt
    }

    #[inline]
    pub fn identity(&self, x: ObjId) -> MorId {
        self.identity[x.index()]
    }

    pub fn is_identity(&self, m: MorId) -> bool {
        self.identity(self.src(m)) == m
    }

    /// `then ∘ first`.
    pub fn compose(&self, first: MorId, then: MorId) -> Result<MorId> {
        if !self.contains_morphism(first) || !self.contains_morphism(then) {
            return Err(Error::DanglingReference(format!(
                "morphism index out of range in `{}`",
                self.name
            )));
        }
        if self.tgt(first) != self.src(then) {
            return Err(Error::NotComposable {
                first: self.mor_name(first).to_owned(),
                then: self.mor_name(then).to_owned(),
            });
        }
        Ok(self.compose_unchecked(first, then))
    }

    /// `then ∘ first` without the composability check; callers guarantee
    /// `tgt(first) = src(then)`.
    #[inline]
    pub fn compose_unchecked(&self, first: MorId, then: MorId) -> MorId {
        debug_assert_eq!(self.tgt(first), self.src(then));
        MorId(self.comp[self.comp_offset[first.index()] + self.out_pos[then.index()] as usize])
    }

    /// All morphisms `a → b` in declaration order.
    #[inline]
    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.hom[a.index() * self.objects.len() + b.index()]
    }

    /// Position of `m` inside `outgoing(src m)`.
    #[inline]
    pub fn out_position(&self, m: MorId) -> usize {
        self.out_pos[m.index()] as usize
    }

    pub fn outgoing(&self, x: ObjId) -> &[MorId] {
        &self.outgoing[x.index()]
    }

    pub fn incoming(&self, x: ObjId) -> &[MorId] {
        &self.incoming[x.index()]
    }

    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        self.inverse[f.index()]
    }

    pub fn invert(&self, f: MorId) -> Result<MorId> {
        self.inverse(f)
            .ok_or_else(|| Error::NotIso(self.mor_name(f).to_owned()))
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse[f.index()].is_some()
    }

    /// Isomorphisms with target `x`, in MorId order.
    pub fn isos_into(&self, x: ObjId) -> &[MorId] {
        &self.isos_into[x.index()]
    }

    /// Every composable pair `(first, then)` with its composite, in MorId order.
    pub fn composition_entries(&self) -> impl Iterator<Item = (MorId, MorId, MorId)> + '_ {
        self.morphisms().flat_map(move |f| {
            self.outgoing(self.tgt(f))
                .iter()
                .map(move |&g| (f, g, self.compose_unchecked(f, g)))
        })
    }
}

/// Structure-preserving map between two finite categories.
#[derive(Clone)]
pub struct Functor {
    name: String,
    source: std::sync::Arc<FiniteCategory>,
    target: std::sync::Arc<FiniteCategory>,
    object_map: Vec<ObjId>,
    morphism_map: Vec<MorId>,
}

impl fmt::Debug for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Functor")
            .field("name", &self.name)
            .field("source", &self.source.name())
            .field("target", &self.target.name())
            .finish()
    }
}

impl Functor {
    /// Validates functoriality; the report names the first offending
    /// morphism or composable pair of each kind.
    pub fn new(
        name: impl Into<String>,
        source: std::sync::Arc<FiniteCategory>,
        target: std::sync::Arc<FiniteCategory>,
        object_map: Vec<ObjId>,
        morphism_map: Vec<MorId>,
    ) -> Result<Self> {
        let name = name.into();
        let mut report = ValidationReport::new(name.clone());
        if object_map.len() != source.object_count() {
            report.push(Violation::DanglingReference {
                context: "object map".into(),
                name: format!("{} entries for {} objects", object_map.len(), source.object_count()),
            });
        }
        if morphism_map.len() != source.morphism_count() {
            report.push(Violation::DanglingReference {
                context: "morphism map".into(),
                name: format!(
                    "{} entries for {} morphisms",
                    morphism_map.len(),
                    source.morphism_count()
                ),
            });
        }
        for &y in &object_map {
            if !target.contains_object(y) {
                report.push(Violation::DanglingReference {
                    context: "object map".into(),
                    name: y.to_string(),
                });
            }
        }
        for &m in &morphism_map {
            if !target.contains_morphism(m) {
                report.push(Violation::DanglingReference {
                    context: "morphism map".into(),
                    name: m.to_string(),
                });
            }
        }
        report.clone().into_result()?;

        for f in source.morphisms() {
            let img = morphism_map[f.index()];
            if target.src(img) != object_map[source.src(f).index()]
                || target.tgt(img) != object_map[source.tgt(f).index()]
            {
                report.push(Violation::NotAFunctor {
                    detail: format!(
                        "`{}` maps to `{}` whose endpoints disagree with the object map",
                        source.mor_name(f),
                        target.mor_name(img)
                    ),
                });
            }
        }
        report.clone().into_result()?;
        for x in source.objects() {
            let img = morphism_map[source.identity(x).index()];
            if img != target.identity(object_map[x.index()]) {
                report.push(Violation::NotAFunctor {
                    detail: format!(
                        "identity of `{}` maps to non-identity `{}`",
                        source.obj_name(x),
                        target.mor_name(img)
                    ),
                });
            }
        }
        for (f, g, h) in source.composition_entries() {
            let lhs = morphism_map[h.index()];
            let rhs = target.compose_unchecked(morphism_map[f.index()], morphism_map[g.index()]);
            if lhs != rhs {
                report.push(Violation::NotAFunctor {
                    detail: format!(
                        "composite of `{}` then `{}` maps to `{}` but the images compose to `{}`",
                        source.mor_name(f),
                        source.mor_name(g),
                        target.mor_name(lhs),
                        target.mor_name(rhs)
                    ),
                });
            }
        }
        report.into_result()?;
        Ok(Functor {
            name,
            source,
            target,
            object_map,
            morphism_map,
        })
    }

    pub fn identity(cat: std::sync::Arc<FiniteCategory>) -> Self {
        let object_map = cat.objects().collect();
        let morphism_map = cat.morphisms().collect();
        Functor {
            name: format!("Id_{}", cat.name()),
            source: cat.clone(),
            target: cat,
            object_map,
            morphism_map,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &FiniteCategory {
        &self.source
    }

    pub fn target(&self) -> &FiniteCategory {
        &self.target
    }

    pub fn source_arc(&self) -> &std::sync::Arc<FiniteCategory> {
        &self.source
    }

    pub fn target_arc(&self) -> &std::sync::Arc<FiniteCategory> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, m: MorId) -> MorId {
        self.morphism_map[m.index()]
    }

    #[inline]
    pub fn apply_obj(&self, x: ObjId) -> ObjId {
        self.object_map[x.index()]
    }

    pub fn try_apply(&self, m: MorId) -> Result<MorId> {
        self.morphism_map
            .get(m.index())
            .copied()
            .ok_or_else(|| Error::DanglingReference(format!("{m} is not in `{}`", self.source.name())))
    }

    pub fn try_apply_obj(&self, x: ObjId) -> Result<ObjId> {
        self.object_map
            .get(x.index())
            .copied()
            .ok_or_else(|| Error::DanglingReference(format!("{x} is not in `{}`", self.source.name())))
    }

    pub fn object_map(&self) -> &[ObjId] {
        &self.object_map
    }

    pub fn morphism_map(&self) -> &[MorId] {
        &self.morphism_map
    }

    /// True when source and target are the same category and both maps are identities.
    pub fn is_identity(&self) -> bool {
        std::sync::Arc::ptr_eq(&self.source, &self.target)
            && self.object_map.iter().enumerate().all(|(i, x)| x.index() == i)
            && self.morphism_map.iter().enumerate().all(|(i, m)| m.index() == i)
    }
}
