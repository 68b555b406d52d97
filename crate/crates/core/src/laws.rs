//! Verification that composition in `Span(C, F)` is well defined, unital and
//! associative.
//!
//! Four families are checked:
//!
//! * `p_independence` — every F-pullback of `(s_R, q_L)` gives the same
//!   composite class;
//! * `representative_independence` — every pair of class members gives the
//!   same composite class;
//! * `units` — `[S]∘[id] = [S] = [id]∘[S]`, and `(id_{S_A}, s_R)` is an
//!   F-pullback of `(s_R, id_{S_R})`;
//! * `associativity` — `([A]∘[B])∘[C] = [A]∘([B]∘[C])`.
//!
//! An undefined composite counts as a violation of the family that needed it.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::generalized::{compose_along, ClassId, SpanCategory};
use crate::pullback::{scan_until, PullbackProbe};
use crate::report::{CheckReport, Witness};
use crate::span::{is_paired, Cospan, Span};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawConfig {
    pub mode: LawMode,
    /// Instances drawn per family in sampled mode, and associativity triples
    /// drawn when exhaustive mode exceeds `triple_threshold`.
    pub samples: usize,
    /// Required in sampled mode; defaults to 0 when exhaustive mode samples triples.
    pub seed: Option<u64>,
    pub triple_threshold: usize,
}

impl Default for LawConfig {
    fn default() -> Self {
        LawConfig {
            mode: LawMode::Exhaustive,
            samples: 1000,
            seed: None,
            triple_threshold: 50_000,
        }
    }
}

const FAMILIES: [&str; 4] = [
    "p_independence",
    "representative_independence",
    "units",
    "associativity",
];

struct Violation {
    family: usize,
    witness: Witness,
}

/// Composite table over the pairs a check needs; `None` marks an undefined composite.
struct Table {
    composites: HashMap<(ClassId, ClassId), Option<ClassId>>,
}

impl Table {
    fn build(sc: &SpanCategory, pairs: &BTreeSet<(ClassId, ClassId)>) -> Result<Table> {
        let list: Vec<(ClassId, ClassId)> = pairs.iter().copied().collect();
        let values = scan_until(&list, |&(a, b)| defined(sc.compose(a, b)), |_| false)?;
        Ok(Table {
            composites: list.into_iter().zip(values).collect(),
        })
    }

    fn get(&self, a: ClassId, b: ClassId) -> Option<ClassId> {
        self.composites[&(a, b)]
    }
}

/// Maps "no F-pullback" to `None`; every other error propagates.
fn defined<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::NoFPullback { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn undefined_witness(sc: &SpanCategory, s: Span, q: Span) -> Witness {
    let cat = sc.base();
    Witness::new("composite is undefined: no F-pullback")
        .with_cospan(
            cat,
            Cospan {
                left: s.right,
                right: q.left,
            },
        )
        .with_span(cat, s)
        .with_span(cat, q)
}

fn check_p_independence(sc: &SpanCategory, a: ClassId, b: ClassId) -> Result<Option<Witness>> {
    let cat = sc.base();
    let (s, q) = (sc.class(a).representative, sc.class(b).representative);
    let c = Cospan {
        left: s.right,
        right: q.left,
    };
    let pbs = sc.f_pullbacks(c)?;
    let Some(&first) = pbs.first() else {
        return Ok(Some(undefined_witness(sc, s, q)));
    };
    let expected = sc.class_of(compose_along(cat, s, first, q)?);
    for &p in pbs.iter().skip(1) {
        if sc.class_of(compose_along(cat, s, p, q)?) != expected {
            return Ok(Some(
                Witness::new("two F-pullbacks give different composite classes")
                    .with_cospan(cat, c)
                    .with_span(cat, s)
                    .with_span(cat, q)
                    .with_span(cat, first)
                    .with_span(cat, p),
            ));
        }
    }
    Ok(None)
}

fn check_representatives(
    sc: &SpanCategory,
    table: &Table,
    a: ClassId,
    b: ClassId,
) -> Result<Option<Witness>> {
    let cat = sc.base();
    let expected = table.get(a, b);
    for &s in sc.members(a) {
        for &q in sc.members(b) {
            let got = defined(sc.compose_spans(s, q))?.map(|r| sc.class_of(r));
            let Some(got) = got else {
                return Ok(Some(undefined_witness(sc, s, q)));
            };
            if Some(got) != expected {
                let mut w = Witness::new("representatives give different composite classes")
                    .with_span(cat, s)
                    .with_span(cat, q)
                    .with_span(cat, sc.class(got).representative);
                if let Some(e) = expected {
                    w = w.with_span(cat, sc.class(e).representative);
                }
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

fn check_units(sc: &SpanCategory, table: &Table, a: ClassId) -> Result<Option<Witness>> {
    let cat = sc.base();
    let class = sc.class(a);
    let s = class.representative;
    let right_id = sc.identity(class.source());
    let left_id = sc.identity(class.target());
    for (x, y, side) in [(a, right_id, "right"), (left_id, a, "left")] {
        match table.get(x, y) {
            Some(r) if r == a => {}
            Some(r) => {
                return Ok(Some(
                    Witness::new(format!("{side} unit law fails"))
                        .with_span(cat, s)
                        .with_span(cat, sc.class(r).representative),
                ))
            }
            None => {
                return Ok(Some(undefined_witness(
                    sc,
                    sc.class(x).representative,
                    sc.class(y).representative,
                )))
            }
        }
    }
    let c = Cospan {
        left: s.right,
        right: cat.identity(s.right_foot(cat)),
    };
    let p = Span {
        left: cat.identity(s.apex(cat)),
        right: s.right,
    };
    let f = sc.functor();
    let probe = PullbackProbe::new(f.target(), c.image(f));
    if !is_paired(cat, p, c) || !probe.accepts(p.image(f)) {
        return Ok(Some(
            Witness::new("(id, s_R) is not an F-pullback of (s_R, id)")
                .with_cospan(cat, c)
                .with_span(cat, p),
        ));
    }
    Ok(None)
}

fn check_associativity(
    sc: &SpanCategory,
    table: &Table,
    (a, b, c): (ClassId, ClassId, ClassId),
) -> Option<Witness> {
    let cat = sc.base();
    let rep = |x: ClassId| sc.class(x).representative;
    let lhs = table.get(a, b).and_then(|ab| table.get(ab, c));
    let rhs = table.get(b, c).and_then(|bc| table.get(a, bc));
    let base = || {
        Witness::new("")
            .with_span(cat, rep(a))
            .with_span(cat, rep(b))
            .with_span(cat, rep(c))
    };
    match (lhs, rhs) {
        (Some(l), Some(r)) if l == r => None,
        (Some(l), Some(r)) => {
            let mut w = base().with_span(cat, rep(l)).with_span(cat, rep(r));
            w.detail = "(A∘B)∘C and A∘(B∘C) differ".into();
            Some(w)
        }
        _ => {
            let mut w = base();
            w.detail = "a composite needed for associativity is undefined".into();
            Some(w)
        }
    }
}

/// Draws `n` indices below `len`, with replacement.
fn sample(rng: &mut ChaCha8Rng, len: usize, n: usize) -> Vec<usize> {
    if len == 0 {
        return Vec::new();
    }
    (0..n).map(|_| rng.gen_range(0..len)).collect()
}

/// Checks the four law families; see the module docs.
pub fn check_category_laws(
    sc: &SpanCategory,
    config: &LawConfig,
    _budget: &Budget,
) -> Result<CheckReport> {
    let sampled = config.mode == LawMode::Sampled;
    if sampled && config.seed.is_none() {
        return Err(Error::PreconditionFailed(
            "sampled mode needs an explicit seed".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.unwrap_or(0));

    let classes: Vec<ClassId> = sc.class_ids().collect();
    let pairs = sc.composable_pairs();
    let mut by_target: HashMap<_, Vec<ClassId>> = HashMap::new();
    for &x in &classes {
        by_target.entry(sc.class(x).target()).or_default().push(x);
    }
    let continuations = |b: ClassId| by_target.get(&sc.class(b).source()).map_or(&[][..], |v| v);
    let triple_count: usize = pairs.iter().map(|&(_, b)| continuations(b).len()).sum();

    let (pair_sel, class_sel): (Vec<usize>, Vec<usize>) = if sampled {
        (
            sample(&mut rng, pairs.len(), config.samples),
            sample(&mut rng, classes.len(), config.samples),
        )
    } else {
        ((0..pairs.len()).collect(), (0..classes.len()).collect())
    };
    let sample_triples = sampled || triple_count > config.triple_threshold;
    let triples: Vec<(ClassId, ClassId, ClassId)> = if sample_triples {
        // Uniform over triples: pick a pair weighted by its continuations.
        let mut offsets = Vec::with_capacity(pairs.len());
        let mut acc = 0usize;
        for &(_, b) in &pairs {
            offsets.push(acc);
            acc += continuations(b).len();
        }
        sample(&mut rng, triple_count, config.samples)
            .into_iter()
            .map(|t| {
                let i = offsets.partition_point(|&o| o <= t) - 1;
                let (a, b) = pairs[i];
                (a, b, continuations(b)[t - offsets[i]])
            })
            .collect()
    } else {
        pairs
            .iter()
            .flat_map(|&(a, b)| continuations(b).iter().map(move |&c| (a, b, c)))
            .collect()
    };

    let mut needed: BTreeSet<(ClassId, ClassId)> = pair_sel.iter().map(|&i| pairs[i]).collect();
    for &i in &class_sel {
        let a = classes[i];
        needed.insert((a, sc.identity(sc.class(a).source())));
        needed.insert((sc.identity(sc.class(a).target()), a));
    }
    for &(a, b, c) in &triples {
        needed.insert((a, b));
        needed.insert((b, c));
    }
    let mut table = Table::build(sc, &needed)?;
    let mut second: BTreeSet<(ClassId, ClassId)> = BTreeSet::new();
    for &(a, b, c) in &triples {
        if let Some(ab) = table.get(a, b) {
            second.insert((ab, c));
        }
        if let Some(bc) = table.get(b, c) {
            second.insert((a, bc));
        }
    }
    second.retain(|k| !table.composites.contains_key(k));
    table.composites.extend(Table::build(sc, &second)?.composites);

    let mut violations: Vec<Violation> = Vec::new();
    let mut push = |family: usize, found: Vec<Option<Witness>>| {
        violations.extend(found.into_iter().flatten().map(|witness| Violation { family, witness }));
    };
    let sel_pairs: Vec<(ClassId, ClassId)> = pair_sel.iter().map(|&i| pairs[i]).collect();
    push(
        0,
        scan_until(&sel_pairs, |&(a, b)| check_p_independence(sc, a, b), |_| false)?,
    );
    push(
        1,
        scan_until(&sel_pairs, |&(a, b)| check_representatives(sc, &table, a, b), |_| false)?,
    );
    let sel_classes: Vec<ClassId> = class_sel.iter().map(|&i| classes[i]).collect();
    push(2, scan_until(&sel_classes, |&a| check_units(sc, &table, a), |_| false)?);
    push(
        3,
        triples.iter().map(|&t| check_associativity(sc, &table, t)).collect(),
    );

    let mut report = CheckReport::new("check-laws", sc.functor().name());
    report.set("classes", classes.len() as u64);
    report.set("composable_pairs", pairs.len() as u64);
    report.set("composable_triples", triple_count as u64);
    report.set(
        "undefined_composites",
        table.composites.values().filter(|v| v.is_none()).count() as u64,
    );
    report.set("sampled", sampled as u64);
    report.set("associativity_sampled", sample_triples as u64);
    if let Some(t) = sc.tight() {
        report.set("span_tight", t as u64);
    }
    let instances = [sel_pairs.len(), sel_pairs.len(), sel_classes.len(), triples.len()];
    for (i, family) in FAMILIES.iter().enumerate() {
        report.set(&format!("{family}.instances"), instances[i] as u64);
        report.set(&format!("{family}.violations"), 0);
    }
    for v in violations {
        let family = FAMILIES[v.family];
        report.bump(&format!("{family}.violations"), 1);
        let mut w = v.witness;
        w.detail = format!("{family}: {}", w.detail);
        report.fail(w.clone());
        report.witness(w);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog::{fixtures, gen_group, GroupSpec};
    use crate::category::Functor;
    use crate::generalized::build_span_category;

    fn laws_hold(sc: &SpanCategory, config: &LawConfig) {
        let r = check_category_laws(sc, config, &Budget::default()).unwrap();
        assert!(r.verdict, "{:#?}", r.counterexample);
    }

    #[test]
    fn identity_functors_satisfy_the_laws() {
        for cat in [
            fixtures::z2(),
            fixtures::b2(),
            fixtures::terminal(),
            gen_group(&GroupSpec::cyclic(3)).unwrap(),
        ] {
            let sc = build_span_category(Functor::identity(Arc::new(cat)), &Budget::default())
                .unwrap();
            laws_hold(&sc, &LawConfig::default());
        }
    }

    #[test]
    fn tight_non_identity_functor() {
        let sc = build_span_category(fixtures::discrete_into_iso(), &Budget::default()).unwrap();
        laws_hold(&sc, &LawConfig::default());
    }

    #[test]
    fn sampled_mode_needs_a_seed() {
        let sc = build_span_category(Functor::identity(Arc::new(fixtures::z2())), &Budget::default())
            .unwrap();
        let config = LawConfig {
            mode: LawMode::Sampled,
            ..LawConfig::default()
        };
        assert!(matches!(
            check_category_laws(&sc, &config, &Budget::default()),
            Err(Error::PreconditionFailed(_))
        ));
        let seeded = LawConfig {
            seed: Some(7),
            samples: 20,
            ..config
        };
        let a = check_category_laws(&sc, &seeded, &Budget::default()).unwrap();
        let b = check_category_laws(&sc, &seeded, &Budget::default()).unwrap();
        assert!(a.verdict);
        assert_eq!(a, b);
        assert_eq!(a.stat("associativity.instances"), 20);
    }

    #[test]
    fn forced_incl_reports_undefined_composites() {
        let sc = SpanCategory::build_unchecked(fixtures::incl(), &Budget::default()).unwrap();
        let r = check_category_laws(&sc, &LawConfig::default(), &Budget::default()).unwrap();
        assert!(!r.verdict);
        assert!(r.stat("undefined_composites") > 0);
    }

    #[test]
    fn sampling_associativity_above_threshold() {
        let sc = build_span_category(Functor::identity(Arc::new(fixtures::b2())), &Budget::default())
            .unwrap();
        let config = LawConfig {
            triple_threshold: 10,
            samples: 50,
            seed: Some(3),
            ..LawConfig::default()
        };
        let r = check_category_laws(&sc, &config, &Budget::default()).unwrap();
        assert!(r.verdict);
        assert_eq!(r.stat("associativity_sampled"), 1);
        assert_eq!(r.stat("associativity.instances"), 50);
    }
}
