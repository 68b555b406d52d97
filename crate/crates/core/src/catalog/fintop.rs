//! Finite topological spaces on at most three points and continuous maps.
//!
//! A topology on `{0..n-1}` is its sorted list of open sets, each a bitmask.
//! Objects are named `T{n}:{opens joined by '.'}`, e.g. `T2:0.1.3` (the
//! Sierpiński space); maps are named `{source}~{target}~{digits}`.

use std::collections::HashMap;

use crate::category::{AssociativityCheck, FiniteCategory, MorId, Morphism, ObjId};
use crate::error::{Error, Result};

use super::finset::all_functions;

pub const MAX_POINTS: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Topology {
    pub points: usize,
    /// Sorted bitmasks of the open sets; always contains `0` and the full set.
    pub opens: Vec<u32>,
}

impl Topology {
    pub fn name(&self) -> String {
        let opens: Vec<String> = self.opens.iter().map(|o| o.to_string()).collect();
        format!("T{}:{}", self.points, opens.join("."))
    }

    pub fn parse(name: &str) -> Option<Topology> {
        let rest = name.strip_prefix('T')?;
        let (n, opens) = rest.split_once(':')?;
        let points: usize = n.parse().ok()?;
        let opens: Vec<u32> = opens
            .split('.')
            .map(|o| o.parse().ok())
            .collect::<Option<_>>()?;
        let t = Topology { points, opens };
        t.is_valid().then_some(t)
    }

    fn full(&self) -> u32 {
        (1u32 << self.points) - 1
    }

    fn is_valid(&self) -> bool {
        let full = self.full();
        self.opens.windows(2).all(|w| w[0] < w[1])
            && self.opens.first() == Some(&0)
            && self.opens.last() == Some(&full)
            && self.opens.iter().all(|&u| {
                self.opens.iter().all(|&v| {
                    self.opens.binary_search(&(u | v)).is_ok()
                        && self.opens.binary_search(&(u & v)).is_ok()
                })
            })
    }

    pub fn is_open(&self, set: u32) -> bool {
        self.opens.binary_search(&set).is_ok()
    }

    /// The topology generated by `basis` (closed under unions; `0` and the
    /// full set added).
    pub fn generated(points: usize, basis: impl IntoIterator<Item = u32>) -> Topology {
        let full = (1u32 << points) - 1;
        let mut opens: Vec<u32> = vec![0, full];
        opens.extend(basis);
        opens.sort_unstable();
        opens.dedup();
        loop {
            let mut added = Vec::new();
            for &u in &opens {
                for &v in &opens {
                    if opens.binary_search(&(u | v)).is_err() && !added.contains(&(u | v)) {
                        added.push(u | v);
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            opens.extend(added);
            opens.sort_unstable();
        }
        Topology { points, opens }
    }
}

/// Every topology on `n` points, in lexicographic order of `opens`.
pub fn topologies(n: usize) -> Vec<Topology> {
    let full = (1u32 << n) - 1;
    let middle: Vec<u32> = (1..full).collect();
    let mut out = Vec::new();
    for pick in 0u32..(1 << middle.len()) {
        let mut opens = vec![0];
        opens.extend(
            middle
                .iter()
                .enumerate()
                .filter(|(i, _)| pick >> i & 1 == 1)
                .map(|(_, &s)| s),
        );
        if n > 0 {
            opens.push(full);
        }
        let t = Topology { points: n, opens };
        if t.is_valid() {
            out.push(t);
        }
    }
    out.sort();
    out
}

pub fn is_continuous(src: &Topology, tgt: &Topology, values: &[usize]) -> bool {
    tgt.opens.iter().all(|&v| {
        let pre = values
            .iter()
            .enumerate()
            .filter(|(_, &y)| v >> y & 1 == 1)
            .fold(0u32, |acc, (x, _)| acc | 1 << x);
        src.is_open(pre)
    })
}

pub fn map_name(src: &Topology, tgt: &Topology, values: &[usize]) -> String {
    let digits: String = values.iter().map(|v| char::from(b'0' + *v as u8)).collect();
    format!("{}~{}~{digits}", src.name(), tgt.name())
}

/// Inverse of [`map_name`].
pub fn parse_map_name(name: &str) -> Option<(Topology, Topology, Vec<usize>)> {
    let mut parts = name.split('~');
    let src = Topology::parse(parts.next()?)?;
    let tgt = Topology::parse(parts.next()?)?;
    let values: Vec<usize> = parts
        .next()?
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as usize))
        .collect::<Option<_>>()?;
    if parts.next().is_some()
        || values.len() != src.points
        || values.iter().any(|&v| v >= tgt.points)
    {
        return None;
    }
    Some((src, tgt, values))
}

/// All topologies on `0..=max_points` points and all continuous maps.
pub fn gen_fintop(max_points: usize) -> Result<FiniteCategory> {
    if max_points > MAX_POINTS {
        return Err(Error::CapExceeded(format!(
            "fintop max points {max_points} exceeds {MAX_POINTS}"
        )));
    }
    let spaces: Vec<Topology> = (0..=max_points).flat_map(topologies).collect();
    let mut morphisms = Vec::new();
    let mut tables: Vec<Vec<usize>> = Vec::new();
    let mut lookup: HashMap<(usize, usize, Vec<usize>), MorId> = HashMap::new();
    for (i, s) in spaces.iter().enumerate() {
        for (j, t) in spaces.iter().enumerate() {
            for values in all_functions(s.points, t.points) {
                if !is_continuous(s, t, &values) {
                    continue;
                }
                lookup.insert((i, j, values.clone()), MorId(morphisms.len() as u32));
                morphisms.push(Morphism {
                    name: map_name(s, t, &values),
                    src: ObjId(i as u32),
                    tgt: ObjId(j as u32),
                });
                tables.push(values);
            }
        }
    }
    let identity = spaces
        .iter()
        .enumerate()
        .map(|(i, s)| lookup[&(i, i, (0..s.points).collect::<Vec<_>>())])
        .collect();
    let compose = |f: MorId, g: MorId| {
        let (a, b) = (&tables[f.index()], &tables[g.index()]);
        let values: Vec<usize> = a.iter().map(|&x| b[x]).collect();
        lookup
            .get(&(morphisms[f.index()].src.index(), morphisms[g.index()].tgt.index(), values))
            .copied()
    };
    // Beyond two points the triple count runs past a billion; composition of
    // functions is associative anyway.
    let assoc = if max_points <= 2 {
        AssociativityCheck::Full
    } else {
        AssociativityCheck::Trusted
    };
    FiniteCategory::from_fn(
        format!("FINTOP{max_points}"),
        spaces.iter().map(Topology::name).collect(),
        morphisms.clone(),
        identity,
        compose,
        assoc,
    )
}
