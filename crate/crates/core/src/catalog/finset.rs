//! Truncated categories of finite sets: all functions, or surjections only.
//!
//! `S{n}` is the set `{0..n-1}`. A map `S{m} → S{n}` is its value vector and
//! is named `f{m}to{n}:{digits}`; ids are lexicographic in (source, target,
//! value vector).

use std::collections::HashMap;

use crate::category::{AssociativityCheck, FiniteCategory, MorId, Morphism, ObjId};
use crate::error::{Error, Result};

pub const MAX_SET_SIZE: usize = 4;

pub fn set_name(n: usize) -> String {
    format!("S{n}")
}

pub fn function_name(m: usize, n: usize, values: &[usize]) -> String {
    let digits: String = values.iter().map(|v| char::from(b'0' + *v as u8)).collect();
    format!("f{m}to{n}:{digits}")
}

/// Inverse of [`set_name`].
pub fn parse_set_name(name: &str) -> Option<usize> {
    name.strip_prefix('S')?.parse().ok()
}

/// Inverse of [`function_name`]: `(m, n, values)`.
pub fn parse_function_name(name: &str) -> Option<(usize, usize, Vec<usize>)> {
    let rest = name.strip_prefix('f')?;
    let (ends, digits) = rest.split_once(':')?;
    let (m, n) = ends.split_once("to")?;
    let (m, n): (usize, usize) = (m.parse().ok()?, n.parse().ok()?);
    let values: Vec<usize> = digits
        .chars()
        .map(|c| c.to_digit(10).map(|d| d as usize))
        .collect::<Option<_>>()?;
    (values.len() == m && values.iter().all(|&v| v < n)).then_some((m, n, values))
}

/// All value vectors `S{m} → S{n}` in lexicographic order.
pub(crate) fn all_functions(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; m];
    if m == 0 {
        out.push(Vec::new());
        return out;
    }
    if n == 0 {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < n {
                break;
            }
            cur[i] = 0;
        }
    }
}

fn is_surjective(n: usize, values: &[usize]) -> bool {
    let mut hit = vec![false; n];
    for &v in values {
        hit[v] = true;
    }
    hit.into_iter().all(|h| h)
}

/// Objects `S{size}` for the given sizes (in order) and every function
/// between them accepted by `keep`, composed as functions.
fn function_category(
    name: String,
    sizes: &[usize],
    keep: impl Fn(usize, usize, &[usize]) -> bool,
) -> Result<FiniteCategory> {
    let objects: Vec<String> = sizes.iter().map(|&n| set_name(n)).collect();
    let mut morphisms = Vec::new();
    let mut tables: Vec<Vec<usize>> = Vec::new();
    let mut lookup: HashMap<(usize, usize, Vec<usize>), MorId> = HashMap::new();
    for (i, &m) in sizes.iter().enumerate() {
        for (j, &n) in sizes.iter().enumerate() {
            for values in all_functions(m, n) {
                if !keep(m, n, &values) {
                    continue;
                }
                let id = MorId(morphisms.len() as u32);
                morphisms.push(Morphism {
                    name: function_name(m, n, &values),
                    src: ObjId(i as u32),
                    tgt: ObjId(j as u32),
                });
                lookup.insert((i, j, values.clone()), id);
                tables.push(values);
            }
        }
    }
    let identity = sizes
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            lookup
                .get(&(i, i, (0..n).collect::<Vec<_>>()))
                .copied()
                .ok_or_else(|| Error::CapExceeded(format!("identity on S{n} was filtered out")))
        })
        .collect::<Result<Vec<_>>>()?;
    let compose = |f: MorId, g: MorId| {
        let (fm, gm) = (&morphisms[f.index()], &morphisms[g.index()]);
        let (a, b) = (&tables[f.index()], &tables[g.index()]);
        let values: Vec<usize> = a.iter().map(|&x| b[x]).collect();
        lookup
            .get(&(fm.src.index(), gm.tgt.index(), values))
            .copied()
    };
    FiniteCategory::from_fn(
        name,
        objects.clone(),
        morphisms.clone(),
        identity,
        compose,
        AssociativityCheck::Full,
    )
}

/// Sets `S0..S{max_size}` and every function between them.
pub fn gen_finset(max_size: usize) -> Result<FiniteCategory> {
    if max_size > MAX_SET_SIZE {
        return Err(Error::CapExceeded(format!(
            "finset max size {max_size} exceeds {MAX_SET_SIZE}"
        )));
    }
    let sizes: Vec<usize> = (0..=max_size).collect();
    function_category(format!("FINSET0{max_size}"), &sizes, |_, _, _| true)
}

/// The listed sizes (each in 1..=4, no repeats) with surjections only.
pub fn gen_finsurj(sizes: &[usize]) -> Result<FiniteCategory> {
    for (i, &n) in sizes.iter().enumerate() {
        if n == 0 || n > MAX_SET_SIZE {
            return Err(Error::CapExceeded(format!(
                "finsurj size {n} outside 1..={MAX_SET_SIZE}"
            )));
        }
        if sizes[..i].contains(&n) {
            return Err(Error::CapExceeded(format!("finsurj size {n} listed twice")));
        }
    }
    let label: String = sizes.iter().map(|n| n.to_string()).collect();
    function_category(format!("FINSURJ{label}"), sizes, |_, n, v| {
        is_surjective(n, v)
    })
}

/// Reads a catalog set category back into sizes and function tables.
pub struct FinSetView<'a> {
    cat: &'a FiniteCategory,
}

impl<'a> FinSetView<'a> {
    pub fn new(cat: &'a FiniteCategory) -> Result<Self> {
        for x in cat.objects() {
            parse_set_name(cat.obj_name(x)).ok_or_else(|| {
                Error::NotCatalog(format!("object `{}` is not named S<n>", cat.obj_name(x)))
            })?;
        }
        for m in cat.morphisms() {
            parse_function_name(cat.mor_name(m)).ok_or_else(|| {
                Error::NotCatalog(format!("morphism `{}` is not a function name", cat.mor_name(m)))
            })?;
        }
        Ok(FinSetView { cat })
    }

    pub fn size(&self, x: ObjId) -> usize {
        parse_set_name(self.cat.obj_name(x)).expect("checked in new")
    }

    pub fn values(&self, m: MorId) -> Vec<usize> {
        parse_function_name(self.cat.mor_name(m))
            .expect("checked in new")
            .2
    }

    pub fn max_size(&self) -> usize {
        self.cat.objects().map(|x| self.size(x)).max().unwrap_or(0)
    }

    pub fn object_of_size(&self, n: usize) -> Option<ObjId> {
        self.cat.object_by_name(&set_name(n))
    }

    pub fn function(&self, m: usize, n: usize, values: &[usize]) -> Option<MorId> {
        self.cat.morphism_by_name(&function_name(m, n, values))
    }
}
