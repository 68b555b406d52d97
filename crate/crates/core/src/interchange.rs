//! JSON files for categories and functors.
//!
//! ```json
//! {"name": "Z2", "objects": ["pt"],
//!  "morphisms": [{"id": "e", "src": "pt", "tgt": "pt"}, ...],
//!  "identities": {"pt": "e"},
//!  "composition": [{"first": "s", "then": "s", "equals": "e"}, ...]}
//! ```
//!
//! Functor files name their source and target category files; relative
//! paths resolve against the functor file's directory first, then the
//! working directory.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::catalog::functor_from_names;
use crate::category::{AssociativityCheck, FiniteCategory, Functor, MorId, Morphism, ObjId};
use crate::error::{Error, Result, ValidationReport, Violation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismRecord {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositeRecord {
    pub first: String,
    pub then: String,
    pub equals: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub name: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismRecord>,
    pub identities: IndexMap<String, String>,
    pub composition: Vec<CompositeRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorFile {
    pub name: String,
    pub source: String,
    pub target: String,
    pub object_map: IndexMap<String, String>,
    pub morphism_map: IndexMap<String, String>,
}

impl CategoryFile {
    /// Every composable pair in (first, then) MorId order.
    pub fn from_category(cat: &FiniteCategory) -> Self {
        CategoryFile {
            name: cat.name().to_owned(),
            objects: cat.object_names().to_vec(),
            morphisms: cat
                .morphisms()
                .map(|m| MorphismRecord {
                    id: cat.mor_name(m).to_owned(),
                    src: cat.obj_name(cat.src(m)).to_owned(),
                    tgt: cat.obj_name(cat.tgt(m)).to_owned(),
                })
                .collect(),
            identities: cat
                .objects()
                .map(|x| (cat.obj_name(x).to_owned(), cat.mor_name(cat.identity(x)).to_owned()))
                .collect(),
            composition: cat
                .composition_entries()
                .map(|(f, g, h)| CompositeRecord {
                    first: cat.mor_name(f).to_owned(),
                    then: cat.mor_name(g).to_owned(),
                    equals: cat.mor_name(h).to_owned(),
                })
                .collect(),
        }
    }

    /// Validates the file and builds the category, reporting every
    /// structural problem found before the axioms are checked.
    pub fn into_category(self) -> Result<FiniteCategory> {
        let mut report = ValidationReport::new(self.name.clone());
        let dangling = |report: &mut ValidationReport, context: String, name: &str| {
            report.push(Violation::DanglingReference {
                context,
                name: name.to_owned(),
            })
        };
        let mut objects: HashMap<&str, ObjId> = HashMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            objects.entry(o).or_insert(ObjId(i as u32));
        }
        let mut morphisms = Vec::with_capacity(self.morphisms.len());
        let mut mindex: HashMap<&str, MorId> = HashMap::new();
        for (i, m) in self.morphisms.iter().enumerate() {
            mindex.entry(&m.id).or_insert(MorId(i as u32));
            let src = objects.get(m.src.as_str()).copied();
            let tgt = objects.get(m.tgt.as_str()).copied();
            if src.is_none() {
                dangling(&mut report, format!("source of `{}`", m.id), &m.src);
            }
            if tgt.is_none() {
                dangling(&mut report, format!("target of `{}`", m.id), &m.tgt);
            }
            morphisms.push(Morphism {
                name: m.id.clone(),
                src: src.unwrap_or(ObjId(0)),
                tgt: tgt.unwrap_or(ObjId(0)),
            });
        }

        let mut identity = vec![MorId(0); self.objects.len()];
        for (o, m) in &self.identities {
            match (objects.get(o.as_str()), mindex.get(m.as_str())) {
                (Some(x), Some(&id)) => identity[x.index()] = id,
                (None, _) => dangling(&mut report, "identities".into(), o),
                (_, None) => dangling(&mut report, format!("identity of `{o}`"), m),
            }
        }
        for o in &self.objects {
            if !self.identities.contains_key(o) {
                report.push(Violation::BadIdentity {
                    object: o.clone(),
                    detail: "no identity listed".into(),
                });
            }
        }

        let mut table: HashMap<(MorId, MorId), MorId> = HashMap::new();
        for c in &self.composition {
            let look = |n: &str| mindex.get(n).copied();
            let (Some(f), Some(g), Some(h)) = (look(&c.first), look(&c.then), look(&c.equals))
            else {
                for n in [&c.first, &c.then, &c.equals] {
                    if look(n).is_none() {
                        dangling(&mut report, "composition".into(), n);
                    }
                }
                continue;
            };
            if morphisms[f.index()].tgt != morphisms[g.index()].src {
                report.push(Violation::UnexpectedComposite {
                    first: c.first.clone(),
                    then: c.then.clone(),
                });
                continue;
            }
            if table.insert((f, g), h).is_some() {
                report.push(Violation::DuplicateComposite {
                    first: c.first.clone(),
                    then: c.then.clone(),
                });
            }
        }
        report.into_result()?;
        FiniteCategory::from_fn(
            self.name,
            self.objects,
            morphisms,
            identity,
            |f, g| table.get(&(f, g)).copied(),
            AssociativityCheck::Full,
        )
    }
}

impl FunctorFile {
    pub fn from_functor(f: &Functor, source: &str, target: &str) -> Self {
        let (s, t) = (f.source(), f.target());
        FunctorFile {
            name: f.name().to_owned(),
            source: source.to_owned(),
            target: target.to_owned(),
            object_map: s
                .objects()
                .map(|x| (s.obj_name(x).to_owned(), t.obj_name(f.apply_obj(x)).to_owned()))
                .collect(),
            morphism_map: s
                .morphisms()
                .map(|m| (s.mor_name(m).to_owned(), t.mor_name(f.apply(m)).to_owned()))
                .collect(),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn parse_category(path: &Path, text: &str) -> Result<FiniteCategory> {
    parse::<CategoryFile>(path, text)?.into_category()
}

pub fn load_category(path: &Path) -> Result<FiniteCategory> {
    parse_category(path, &read(path)?)
}

/// Resolves a category path named inside a functor file.
fn resolve_relative(functor_path: &Path, named: &str) -> PathBuf {
    let named = Path::new(named);
    if named.is_absolute() {
        return named.to_path_buf();
    }
    let beside = functor_path
        .parent()
        .map(|d| d.join(named))
        .unwrap_or_else(|| named.to_path_buf());
    if beside.exists() {
        beside
    } else {
        named.to_path_buf()
    }
}

pub fn load_functor(path: &Path) -> Result<Functor> {
    let file: FunctorFile = parse(path, &read(path)?)?;
    let source = Arc::new(load_category(&resolve_relative(path, &file.source))?);
    let target = if file.target == file.source {
        source.clone()
    } else {
        Arc::new(load_category(&resolve_relative(path, &file.target))?)
    };
    functor_from_names(file.name, source, target, &file.object_map, &file.morphism_map)
}

/// Pretty JSON with a trailing newline; stable across runs.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn category_to_json(cat: &FiniteCategory) -> String {
    to_json(&CategoryFile::from_category(cat))
}
