use std::sync::Arc;

use indexmap::IndexMap;

use crate::category::{FiniteCategory, Functor, MorId, ObjId};
use crate::error::{Error, Result, ValidationReport, Violation};

use super::finset::{function_name, set_name, FinSetView};
use super::fintop::parse_map_name;

fn dangling(report: &mut ValidationReport, context: &str, name: &str) {
    report.push(Violation::DanglingReference {
        context: context.into(),
        name: name.into(),
    });
}

/// Builds a functor from name-to-name maps, reporting every unmapped or
/// unknown name before checking functoriality.
pub fn functor_from_names(
    name: impl Into<String>,
    source: Arc<FiniteCategory>,
    target: Arc<FiniteCategory>,
    object_map: &IndexMap<String, String>,
    morphism_map: &IndexMap<String, String>,
) -> Result<Functor> {
    let name = name.into();
    let mut report = ValidationReport::new(name.clone());
    let mut objs = Vec::with_capacity(source.object_count());
    for x in source.objects() {
        match object_map.get(source.obj_name(x)) {
            None => dangling(&mut report, "object map (unmapped object)", source.obj_name(x)),
            Some(y) => match target.object_by_name(y) {
                Some(y) => objs.push(y),
                None => dangling(&mut report, "object map target", y),
            },
        }
    }
    let mut mors = Vec::with_capacity(source.morphism_count());
    for m in source.morphisms() {
        match morphism_map.get(source.mor_name(m)) {
            None => dangling(&mut report, "morphism map (unmapped morphism)", source.mor_name(m)),
            Some(g) => match target.morphism_by_name(g) {
                Some(g) => mors.push(g),
                None => dangling(&mut report, "morphism map target", g),
            },
        }
    }
    for k in object_map.keys() {
        if source.object_by_name(k).is_none() {
            dangling(&mut report, "object map source", k);
        }
    }
    for k in morphism_map.keys() {
        if source.morphism_by_name(k).is_none() {
            dangling(&mut report, "morphism map source", k);
        }
    }
    report.into_result()?;
    Functor::new(name, source, target, objs, mors)
}

/// Inclusion of `sub` into `sup` along explicit matchings; must be injective.
pub fn gen_inclusion(
    name: impl Into<String>,
    sub: Arc<FiniteCategory>,
    sup: Arc<FiniteCategory>,
    object_map: &IndexMap<String, String>,
    morphism_map: &IndexMap<String, String>,
) -> Result<Functor> {
    let f = functor_from_names(name, sub, sup, object_map, morphism_map)?;
    let injective = |xs: Vec<u32>| {
        let mut s = xs.clone();
        s.sort_unstable();
        s.dedup();
        s.len() == xs.len()
    };
    if !injective(f.object_map().iter().map(|x| x.0).collect())
        || !injective(f.morphism_map().iter().map(|m| m.0).collect())
    {
        let mut r = ValidationReport::new(f.name());
        r.push(Violation::NotAFunctor {
            detail: "inclusion is not injective".into(),
        });
        return Err(Error::Invalid(r));
    }
    Ok(f)
}

/// Inclusion matching every object and morphism of `sub` by name.
pub fn gen_inclusion_by_name(
    name: impl Into<String>,
    sub: Arc<FiniteCategory>,
    sup: Arc<FiniteCategory>,
) -> Result<Functor> {
    let objects = sub
        .object_names()
        .iter()
        .map(|n| (n.clone(), n.clone()))
        .collect();
    let morphisms = sub
        .morphisms()
        .map(|m| (sub.mor_name(m).to_owned(), sub.mor_name(m).to_owned()))
        .collect();
    gen_inclusion(name, sub.clone(), sup, &objects, &morphisms)
}

/// Forgetful functor from a catalog space category to a catalog set category.
pub fn gen_forgetful(top: Arc<FiniteCategory>, set: Arc<FiniteCategory>) -> Result<Functor> {
    let mut objects = IndexMap::new();
    let mut morphisms = IndexMap::new();
    for m in top.morphisms() {
        let (s, t, values) = parse_map_name(top.mor_name(m))
            .ok_or_else(|| Error::NotCatalog(format!("`{}` is not a map name", top.mor_name(m))))?;
        objects.insert(s.name(), set_name(s.points));
        objects.insert(t.name(), set_name(t.points));
        morphisms.insert(
            top.mor_name(m).to_owned(),
            function_name(s.points, t.points, &values),
        );
    }
    let name = format!("U:{}->{}", top.name(), set.name());
    functor_from_names(name, top, set, &objects, &morphisms)
}

/// Covariant hom functor `Hom(b, -)` into a catalog set category; the
/// elements of each hom set are numbered in MorId order.
pub fn gen_hom_functor(
    cat: Arc<FiniteCategory>,
    b: ObjId,
    target: Arc<FiniteCategory>,
) -> Result<Functor> {
    let view = FinSetView::new(&target)?;
    let cap = view.max_size();
    let mut objs = Vec::with_capacity(cat.object_count());
    for x in cat.objects() {
        let size = cat.hom(b, x).len();
        let y = view.object_of_size(size).ok_or_else(|| Error::HomSetTooLarge {
            base: cat.obj_name(b).to_owned(),
            object: cat.obj_name(x).to_owned(),
            size,
            cap,
        })?;
        objs.push(y);
    }
    let mut mors: Vec<MorId> = Vec::with_capacity(cat.morphism_count());
    for f in cat.morphisms() {
        let (x, y) = (cat.src(f), cat.tgt(f));
        let (from, to) = (cat.hom(b, x), cat.hom(b, y));
        let values: Vec<usize> = from
            .iter()
            .map(|&beta| {
                let g = cat.compose_unchecked(beta, f);
                to.iter().position(|&h| h == g).expect("composite lies in the hom set")
            })
            .collect();
        let name = function_name(from.len(), to.len(), &values);
        mors.push(view.function(from.len(), to.len(), &values).ok_or_else(|| {
            Error::NotCatalog(format!("`{}` lacks function `{name}`", target.name()))
        })?);
    }
    let name = format!("Hom({},-)", cat.obj_name(b));
    Functor::new(name, cat, target, objs, mors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{fixtures, gen_finset, gen_fintop};

    #[test]
    fn forgetful_is_a_functor() {
        let top = Arc::new(gen_fintop(2).unwrap());
        let set = Arc::new(gen_finset(2).unwrap());
        let u = gen_forgetful(top.clone(), set).unwrap();
        let sier = top.resolve_object("T2:0.1.3").unwrap();
        assert_eq!(u.target().obj_name(u.apply_obj(sier)), "S2");
    }

    #[test]
    fn hom_functor_on_z2() {
        let z2 = Arc::new(fixtures::z2());
        let fin = Arc::new(fixtures::finset04());
        let h = gen_hom_functor(z2.clone(), ObjId(0), fin).unwrap();
        let s = z2.resolve_morphism("s").unwrap();
        assert_eq!(h.target().mor_name(h.apply(s)), "f2to2:10");
    }

    #[test]
    fn hom_functor_respects_cap() {
        let b2 = Arc::new(fixtures::b2());
        let small = Arc::new(gen_finset(0).unwrap());
        let bot = b2.resolve_object("bot").unwrap();
        assert!(matches!(
            gen_hom_functor(b2, bot, small),
            Err(Error::HomSetTooLarge { size: 1, cap: 0, .. })
        ));
    }

    #[test]
    fn inclusion_must_be_total_and_injective() {
        let z2 = Arc::new(fixtures::z2());
        let term = Arc::new(fixtures::terminal());
        assert!(gen_inclusion_by_name("bad", z2.clone(), term.clone()).is_err());
        let objects = [("pt".to_string(), "pt".to_string())].into_iter().collect();
        let morphisms = [("e", "id_pt"), ("s", "id_pt")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert!(gen_inclusion("collapse", z2, term, &objects, &morphisms).is_err());
    }
}
