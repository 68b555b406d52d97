//! Generators for the categories and functors the rest of the crate is
//! exercised on. Every generator is deterministic: the same parameters give
//! the same ids, names and order.

pub mod finset;
pub mod fintop;
pub mod fixtures;
pub mod free;
pub mod functors;
pub mod group;
pub mod oracle;
pub mod poset;

use serde::{Deserialize, Serialize};

use crate::category::FiniteCategory;
use crate::error::Result;

pub use finset::{gen_finset, gen_finsurj, FinSetView};
pub use fintop::{gen_fintop, Topology};
pub use free::{gen_free, EdgeSpec, GraphSpec};
pub use functors::{
    functor_from_names, gen_forgetful, gen_hom_functor, gen_inclusion, gen_inclusion_by_name,
};
pub use group::{gen_group, GroupSpec};
pub use oracle::{fibered_product_oracle, OracleKind};
pub use poset::{gen_poset, PosetSpec};

/// Parameters of a category generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    FinSet { max_size: usize },
    FinSurj { sizes: Vec<usize> },
    FinTop { max_points: usize },
    Poset(PosetSpec),
    Group(GroupSpec),
    Free { graph: GraphSpec, max_path_len: usize },
}

pub fn generate(spec: &GeneratorSpec) -> Result<FiniteCategory> {
    match spec {
        GeneratorSpec::FinSet { max_size } => gen_finset(*max_size),
        GeneratorSpec::FinSurj { sizes } => gen_finsurj(sizes),
        GeneratorSpec::FinTop { max_points } => gen_fintop(*max_points),
        GeneratorSpec::Poset(p) => gen_poset(p),
        GeneratorSpec::Group(g) => gen_group(g),
        GeneratorSpec::Free {
            graph,
            max_path_len,
        } => gen_free(graph, *max_path_len),
    }
}
