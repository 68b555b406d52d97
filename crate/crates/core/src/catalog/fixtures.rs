//! Small named categories and functors used throughout tests and the CLI.

use std::sync::{Arc, OnceLock};

use crate::category::{AssociativityCheck, FiniteCategory, Functor, MorId, Morphism, ObjId};

use super::free::{gen_free, EdgeSpec, GraphSpec};
use super::functors::{gen_hom_functor, gen_inclusion_by_name};
use super::group::{gen_group, GroupSpec};
use super::poset::{gen_poset, PosetSpec};
use super::{gen_finset, gen_finsurj};

fn graph(name: &str, vertices: &[&str], edges: &[(&str, &str, &str)]) -> FiniteCategory {
    let spec = GraphSpec {
        name: name.into(),
        vertices: vertices.iter().map(|v| v.to_string()).collect(),
        edges: edges
            .iter()
            .map(|(id, s, t)| EdgeSpec {
                id: id.to_string(),
                src: s.to_string(),
                tgt: t.to_string(),
            })
            .collect(),
    };
    gen_free(&spec, 8).expect("fixture graph is acyclic")
}

/// One object `pt`, one morphism `id_pt`.
pub fn terminal() -> FiniteCategory {
    graph("1", &["pt"], &[])
}

/// The cyclic group of order two on elements `e`, `s`.
pub fn z2() -> FiniteCategory {
    gen_group(&GroupSpec {
        name: "Z2".into(),
        elements: vec!["e".into(), "s".into()],
        table: vec![vec!["e".into(), "s".into()], vec!["s".into(), "e".into()]],
    })
    .expect("Z2 is a group")
}

/// The Boolean lattice on two atoms: `bot < a, b < top`.
pub fn b2() -> FiniteCategory {
    let rel = [
        ("bot", "a"),
        ("bot", "b"),
        ("bot", "top"),
        ("a", "top"),
        ("b", "top"),
    ];
    gen_poset(&PosetSpec {
        name: "B2".into(),
        elements: ["bot", "a", "b", "top"].map(String::from).to_vec(),
        relation: rel.iter().map(|(x, y)| (x.to_string(), y.to_string())).collect(),
    })
    .expect("B2 is a poset")
}

pub fn finset04() -> FiniteCategory {
    static CAT: OnceLock<FiniteCategory> = OnceLock::new();
    CAT.get_or_init(|| gen_finset(4).expect("finset04")).clone()
}

pub fn finsurj12() -> FiniteCategory {
    gen_finsurj(&[1, 2]).expect("finsurj12")
}

/// Inclusion of surjections between 1 and 2 elements into all functions on ≤ 4.
pub fn incl() -> Functor {
    gen_inclusion_by_name("INCL", Arc::new(finsurj12()), Arc::new(finset04()))
        .expect("inclusion by name")
}

/// `x → y` with the single edge `f`.
pub fn walking_arrow() -> FiniteCategory {
    graph("ARROW", &["x", "y"], &[("f", "x", "y")])
}

/// Two discrete objects `a`, `b`.
pub fn discrete2() -> FiniteCategory {
    graph("DISC2", &["a", "b"], &[])
}

/// Objects `a`, `b` with mutually inverse `i: a → b` and `j: b → a`.
pub fn walking_iso() -> FiniteCategory {
    let mor = |name: &str, s: u32, t: u32| Morphism {
        name: name.into(),
        src: ObjId(s),
        tgt: ObjId(t),
    };
    // id_a, id_b, i, j
    FiniteCategory::from_fn(
        "ISO",
        vec!["a".into(), "b".into()],
        vec![mor("id_a", 0, 0), mor("id_b", 1, 1), mor("i", 0, 1), mor("j", 1, 0)],
        vec![MorId(0), MorId(1)],
        |f, g| {
            Some(MorId(match (f.0, g.0) {
                (0 | 1, x) | (x, 0 | 1) => x,
                (2, 3) => 0,
                (3, 2) => 1,
                _ => return None,
            }))
        },
        AssociativityCheck::Full,
    )
    .expect("walking iso")
}

/// Collapses the walking arrow to a point. Not span tight: the F-pullbacks
/// `(id_y, id_y)` and `(f, f)` of `(id_y, id_y)` have isomorphic images but
/// no isomorphism between them upstairs.
pub fn arrow_to_terminal() -> Functor {
    let src = Arc::new(walking_arrow());
    let tgt = Arc::new(terminal());
    Functor::new(
        "ARROW->1",
        src,
        tgt,
        vec![ObjId(0); 2],
        vec![MorId(0); 3],
    )
    .expect("constant functor")
}

/// Inclusion of the discrete category on `a`, `b` into the walking iso.
pub fn discrete_into_iso() -> Functor {
    gen_inclusion_by_name("DISC2->ISO", Arc::new(discrete2()), Arc::new(walking_iso()))
        .expect("inclusion by name")
}

/// `Hom(pt, -)` on Z2: the regular representation into FINSET04.
pub fn z2_regular() -> Functor {
    gen_hom_functor(Arc::new(z2()), ObjId(0), Arc::new(finset04())).expect("hom functor")
}
