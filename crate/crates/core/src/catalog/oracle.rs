//! Fibered products computed from the concrete sets, independent of any
//! search. Used to cross-check the pullback engine on catalog categories.

use crate::category::FiniteCategory;
use crate::error::{Error, Result};
use crate::span::{Cospan, Span};

use super::finset::{function_name, parse_function_name, FinSetView};
use super::fintop::{map_name, parse_map_name, Topology};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    FinSet,
    FinTop,
}

/// Pairs `(x, y)` with `a[x] = b[y]`, lexicographic.
fn fiber_pairs(a: &[usize], b: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (x, &ax) in a.iter().enumerate() {
        for (y, &by) in b.iter().enumerate() {
            if ax == by {
                out.push((x, y));
            }
        }
    }
    out
}

/// The textbook fibered product `{(x, y) | c_L(x) = c_R(y)}` with its two
/// projections, as a span of `cat`.
pub fn fibered_product_oracle(kind: OracleKind, cat: &FiniteCategory, c: Cospan) -> Result<Span> {
    match kind {
        OracleKind::FinSet => finset_product(cat, c),
        OracleKind::FinTop => fintop_product(cat, c),
    }
}

fn finset_product(cat: &FiniteCategory, c: Cospan) -> Result<Span> {
    let decode = |m| {
        parse_function_name(cat.mor_name(m)).ok_or_else(|| {
            Error::NotCatalog(format!("`{}` is not a function name", cat.mor_name(m)))
        })
    };
    let (m, _, a) = decode(c.left)?;
    let (n, _, b) = decode(c.right)?;
    let pairs = fiber_pairs(&a, &b);
    let k = pairs.len();
    let pl: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let pr: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    match (
        cat.morphism_by_name(&function_name(k, m, &pl)),
        cat.morphism_by_name(&function_name(k, n, &pr)),
    ) {
        (Some(l), Some(r)) => Span::new(cat, l, r),
        _ => Err(Error::ApexExceedsCap {
            size: k,
            cap: FinSetView::new(cat)?.max_size(),
        }),
    }
}

fn fintop_product(cat: &FiniteCategory, c: Cospan) -> Result<Span> {
    let decode = |m| {
        parse_map_name(cat.mor_name(m))
            .ok_or_else(|| Error::NotCatalog(format!("`{}` is not a map name", cat.mor_name(m))))
    };
    let (x, _, a) = decode(c.left)?;
    let (y, _, b) = decode(c.right)?;
    let pairs = fiber_pairs(&a, &b);
    let k = pairs.len();
    // Subspace of the product: basis (U × V) ∩ P.
    let mut basis = Vec::new();
    for &u in &x.opens {
        for &v in &y.opens {
            let mask = pairs
                .iter()
                .enumerate()
                .filter(|(_, &(p, q))| u >> p & 1 == 1 && v >> q & 1 == 1)
                .fold(0u32, |acc, (i, _)| acc | 1 << i);
            basis.push(mask);
        }
    }
    let apex = Topology::generated(k, basis);
    if cat.object_by_name(&apex.name()).is_none() {
        let cap = cat
            .objects()
            .filter_map(|o| Topology::parse(cat.obj_name(o)).map(|t| t.points))
            .max()
            .unwrap_or(0);
        return Err(Error::ApexExceedsCap { size: k, cap });
    }
    let pl: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let pr: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    Span::new(
        cat,
        cat.resolve_morphism(&map_name(&apex, &x, &pl))?,
        cat.resolve_morphism(&map_name(&apex, &y, &pr))?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::catalog::{fixtures, gen_finset, gen_fintop};
    use crate::pullback::{enumerate_cospans, find_pullbacks};
    use crate::span::same_class;

    #[test]
    fn kernel_pair_of_constant_map() {
        let cat = fixtures::finset04();
        let f = cat.resolve_morphism("f2to1:00").unwrap();
        let s = fibered_product_oracle(OracleKind::FinSet, &cat, Cospan { left: f, right: f }).unwrap();
        assert_eq!(cat.mor_name(s.left), "f4to2:0011");
        assert_eq!(cat.mor_name(s.right), "f4to2:0101");
    }

    #[test]
    fn oracle_matches_search_on_small_finset() {
        let cat = gen_finset(2).unwrap();
        let b = Budget::default();
        for c in enumerate_cospans(&cat, &b).unwrap() {
            let pbs = find_pullbacks(&cat, c, &b).unwrap();
            match fibered_product_oracle(OracleKind::FinSet, &cat, c) {
                Ok(s) => {
                    assert!(!pbs.is_empty());
                    assert!(pbs.iter().all(|&p| same_class(&cat, p, s)));
                }
                Err(Error::ApexExceedsCap { .. }) => assert!(pbs.is_empty()),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn oracle_matches_search_on_fintop2() {
        let cat = gen_fintop(2).unwrap();
        let b = Budget::default();
        for c in enumerate_cospans(&cat, &b).unwrap() {
            let pbs = find_pullbacks(&cat, c, &b).unwrap();
            match fibered_product_oracle(OracleKind::FinTop, &cat, c) {
                Ok(s) => {
                    assert!(!pbs.is_empty(), "{c:?}");
                    assert!(pbs.iter().all(|&p| same_class(&cat, p, s)));
                }
                Err(Error::ApexExceedsCap { .. }) => assert!(pbs.is_empty()),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn oracle_reports_cap() {
        let cat = fixtures::finset04();
        let f = cat.resolve_morphism("f3to1:000").unwrap();
        assert!(matches!(
            fibered_product_oracle(OracleKind::FinSet, &cat, Cospan { left: f, right: f }),
            Err(Error::ApexExceedsCap { size: 9, cap: 4 })
        ));
    }
}
