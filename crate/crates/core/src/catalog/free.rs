use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::category::{AssociativityCheck, FiniteCategory, MorId, Morphism, ObjId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub name: String,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
}

pub fn identity_name(v: &str) -> String {
    format!("id_{v}")
}

/// Free category on an acyclic graph: identities `id_v`, then nonempty paths
/// named by their edges joined with `.` in traversal order, shortest first.
pub fn gen_free(graph: &GraphSpec, max_path_len: usize) -> Result<FiniteCategory> {
    let mut vindex = HashMap::new();
    for (i, v) in graph.vertices.iter().enumerate() {
        if vindex.insert(v.as_str(), i).is_some() {
            return Err(Error::Invalid({
                let mut r = crate::error::ValidationReport::new(graph.name.clone());
                r.push(crate::error::Violation::DuplicateName {
                    what: "vertex".into(),
                    name: v.clone(),
                });
                r
            }));
        }
    }
    let resolve = |v: &str| {
        vindex
            .get(v)
            .copied()
            .ok_or_else(|| Error::DanglingReference(format!("edge endpoint `{v}`")))
    };
    let edges: Vec<(usize, usize)> = graph
        .edges
        .iter()
        .map(|e| Ok((resolve(&e.src)?, resolve(&e.tgt)?)))
        .collect::<Result<_>>()?;

    // Paths of length k, grown one edge at a time.
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = (0..edges.len()).map(|e| vec![e]).collect();
    let mut len = 1;
    while !frontier.is_empty() {
        if len > graph.vertices.len() {
            return Err(Error::CapExceeded(format!(
                "graph `{}` has a cycle; its free category is infinite",
                graph.name
            )));
        }
        if len > max_path_len {
            return Err(Error::CapExceeded(format!(
                "graph `{}` has paths longer than {max_path_len}",
                graph.name
            )));
        }
        let mut next = Vec::new();
        for p in &frontier {
            let end = edges[*p.last().unwrap()].1;
            for (e, &(s, _)) in edges.iter().enumerate() {
                if s == end {
                    let mut q = p.clone();
                    q.push(e);
                    next.push(q);
                }
            }
        }
        paths.append(&mut frontier);
        frontier = next;
        len += 1;
    }

    let mut morphisms: Vec<Morphism> = graph
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| Morphism {
            name: identity_name(v),
            src: ObjId(i as u32),
            tgt: ObjId(i as u32),
        })
        .collect();
    let mut lookup: HashMap<Vec<usize>, MorId> = HashMap::new();
    for p in &paths {
        lookup.insert(p.clone(), MorId(morphisms.len() as u32));
        let name: Vec<&str> = p.iter().map(|&e| graph.edges[e].id.as_str()).collect();
        morphisms.push(Morphism {
            name: name.join("."),
            src: ObjId(edges[p[0]].0 as u32),
            tgt: ObjId(edges[*p.last().unwrap()].1 as u32),
        });
    }
    let nv = graph.vertices.len();
    let identity = (0..nv).map(|i| MorId(i as u32)).collect();
    let path_of = |m: MorId| -> &[usize] {
        if m.index() < nv {
            &[]
        } else {
            &paths[m.index() - nv]
        }
    };
    FiniteCategory::from_fn(
        graph.name.clone(),
        graph.vertices.clone(),
        morphisms.clone(),
        identity,
        |f, g| {
            if g.index() < nv {
                return Some(f);
            }
            if f.index() < nv {
                return Some(g);
            }
            let mut p = path_of(f).to_vec();
            p.extend_from_slice(path_of(g));
            lookup.get(&p).copied()
        },
        AssociativityCheck::Trusted,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(id: &str, s: &str, t: &str) -> EdgeSpec {
        EdgeSpec {
            id: id.into(),
            src: s.into(),
            tgt: t.into(),
        }
    }

    #[test]
    fn composable_pair() {
        let g = GraphSpec {
            name: "A3".into(),
            vertices: vec!["x".into(), "y".into(), "z".into()],
            edges: vec![edge("f", "x", "y"), edge("g", "y", "z")],
        };
        let c = gen_free(&g, 4).unwrap();
        assert_eq!(c.morphism_count(), 6);
        let f = c.resolve_morphism("f").unwrap();
        let gm = c.resolve_morphism("g").unwrap();
        assert_eq!(c.mor_name(c.compose(f, gm).unwrap()), "f.g");
        assert!(matches!(gen_free(&g, 1), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn cycles_are_rejected() {
        let g = GraphSpec {
            name: "loop".into(),
            vertices: vec!["x".into()],
            edges: vec![edge("f", "x", "x")],
        };
        assert!(matches!(gen_free(&g, 100), Err(Error::CapExceeded(_))));
    }
}
