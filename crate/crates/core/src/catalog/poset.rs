use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::category::{AssociativityCheck, FiniteCategory, MorId, Morphism, ObjId};
use crate::error::{Error, Result};

/// A finite poset given by generating relations `x ≤ y`; the reflexive
/// closure is added, transitivity must already hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetSpec {
    pub name: String,
    pub elements: Vec<String>,
    pub relation: Vec<(String, String)>,
}

pub fn le_name(x: &str, y: &str) -> String {
    format!("{x}_le_{y}")
}

/// The poset as a category: one morphism `x_le_y` for each `x ≤ y`.
pub fn gen_poset(spec: &PosetSpec) -> Result<FiniteCategory> {
    let n = spec.elements.len();
    let mut index = HashMap::new();
    for (i, e) in spec.elements.iter().enumerate() {
        if index.insert(e.as_str(), i).is_some() {
            return Err(Error::NotAPartialOrder(format!("element `{e}` listed twice")));
        }
    }
    let mut le = vec![vec![false; n]; n];
    for i in 0..n {
        le[i][i] = true;
    }
    for (x, y) in &spec.relation {
        let lookup = |e: &str| {
            index
                .get(e)
                .copied()
                .ok_or_else(|| Error::DanglingReference(format!("relation mentions unknown `{e}`")))
        };
        le[lookup(x)?][lookup(y)?] = true;
    }
    let el = &spec.elements;
    for i in 0..n {
        for j in 0..n {
            if i != j && le[i][j] && le[j][i] {
                return Err(Error::NotAPartialOrder(format!(
                    "`{}` ≤ `{}` and `{}` ≤ `{}`",
                    el[i], el[j], el[j], el[i]
                )));
            }
            for k in 0..n {
                if le[i][j] && le[j][k] && !le[i][k] {
                    return Err(Error::NotAPartialOrder(format!(
                        "`{}` ≤ `{}` ≤ `{}` but not `{}` ≤ `{}`",
                        el[i], el[j], el[k], el[i], el[k]
                    )));
                }
            }
        }
    }

    let mut morphisms = Vec::new();
    let mut ids = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if le[i][j] {
                ids[i][j] = Some(MorId(morphisms.len() as u32));
                morphisms.push(Morphism {
                    name: le_name(&el[i], &el[j]),
                    src: ObjId(i as u32),
                    tgt: ObjId(j as u32),
                });
            }
        }
    }
    let identity = (0..n).map(|i| ids[i][i].unwrap()).collect();
    let ends: Vec<(usize, usize)> = morphisms
        .iter()
        .map(|m| (m.src.index(), m.tgt.index()))
        .collect();
    FiniteCategory::from_fn(
        spec.name.clone(),
        el.clone(),
        morphisms,
        identity,
        |f, g| ids[ends[f.index()].0][ends[g.index()].1],
        AssociativityCheck::Trusted,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(rel: &[(&str, &str)]) -> PosetSpec {
        PosetSpec {
            name: "P".into(),
            elements: vec!["x".into(), "y".into(), "z".into()],
            relation: rel.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        }
    }

    #[test]
    fn chain() {
        let c = gen_poset(&spec(&[("x", "y"), ("y", "z"), ("x", "z")])).unwrap();
        assert_eq!(c.morphism_count(), 6);
        let xy = c.resolve_morphism("x_le_y").unwrap();
        let yz = c.resolve_morphism("y_le_z").unwrap();
        assert_eq!(c.mor_name(c.compose(xy, yz).unwrap()), "x_le_z");
    }

    #[test]
    fn rejects_non_orders() {
        assert!(matches!(
            gen_poset(&spec(&[("x", "y"), ("y", "x")])),
            Err(Error::NotAPartialOrder(_))
        ));
        assert!(matches!(
            gen_poset(&spec(&[("x", "y"), ("y", "z")])),
            Err(Error::NotAPartialOrder(_))
        ));
        assert!(gen_poset(&spec(&[("x", "w")])).is_err());
    }
}
