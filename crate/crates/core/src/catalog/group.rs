use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::category::{AssociativityCheck, FiniteCategory, MorId, Morphism, ObjId};
use crate::error::{Error, Result};

pub const GROUP_OBJECT: &str = "pt";

/// A finite group by multiplication table: `table[i][j]` names `elements[i]·elements[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
}

impl GroupSpec {
    /// The cyclic group of order `n` with elements `r0..r{n-1}`.
    pub fn cyclic(n: usize) -> GroupSpec {
        let el: Vec<String> = (0..n).map(|i| format!("r{i}")).collect();
        GroupSpec {
            name: format!("Z{n}"),
            table: (0..n)
                .map(|i| (0..n).map(|j| el[(i + j) % n].clone()).collect())
                .collect(),
            elements: el,
        }
    }
}

/// The one-object category of a group. Composing `f` then `g` is `g·f`.
pub fn gen_group(spec: &GroupSpec) -> Result<FiniteCategory> {
    let n = spec.elements.len();
    let mut index = HashMap::new();
    for (i, e) in spec.elements.iter().enumerate() {
        if index.insert(e.as_str(), i).is_some() {
            return Err(Error::NotAGroup(format!("element `{e}` listed twice")));
        }
    }
    if spec.table.len() != n || spec.table.iter().any(|row| row.len() != n) {
        return Err(Error::NotAGroup(format!("table is not {n}×{n}")));
    }
    let mut mul = vec![vec![0usize; n]; n];
    for (i, row) in spec.table.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            mul[i][j] = *index
                .get(e.as_str())
                .ok_or_else(|| Error::NotAGroup(format!("table entry `{e}` is not an element")))?;
        }
    }
    let el = &spec.elements;
    let unit = (0..n)
        .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
        .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                    return Err(Error::NotAGroup(format!(
                        "({}·{})·{} ≠ {}·({}·{})",
                        el[a], el[b], el[c], el[a], el[b], el[c]
                    )));
                }
            }
        }
        if !(0..n).any(|b| mul[a][b] == unit && mul[b][a] == unit) {
            return Err(Error::NotAGroup(format!("`{}` has no inverse", el[a])));
        }
    }
    let morphisms = el
        .iter()
        .map(|e| Morphism {
            name: e.clone(),
            src: ObjId(0),
            tgt: ObjId(0),
        })
        .collect();
    FiniteCategory::from_fn(
        spec.name.clone(),
        vec![GROUP_OBJECT.into()],
        morphisms,
        vec![MorId(unit as u32)],
        |f, g| Some(MorId(mul[g.index()][f.index()] as u32)),
        AssociativityCheck::Trusted,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_groups() {
        let c = gen_group(&GroupSpec::cyclic(3)).unwrap();
        assert_eq!(c.morphism_count(), 3);
        let r1 = c.resolve_morphism("r1").unwrap();
        let r2 = c.compose(r1, r1).unwrap();
        assert_eq!(c.mor_name(r2), "r2");
        assert_eq!(c.invert(r1).unwrap(), r2);
        assert!(c.morphisms().all(|m| c.is_iso(m)));
    }

    #[test]
    fn rejects_non_groups() {
        let mut bad = GroupSpec::cyclic(2);
        bad.table[1][1] = "r1".into();
        assert!(matches!(gen_group(&bad), Err(Error::NotAGroup(_))));
        let mut ragged = GroupSpec::cyclic(2);
        ragged.table[0].pop();
        assert!(gen_group(&ragged).is_err());
    }
}
