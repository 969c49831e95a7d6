pub mod bitset;
pub mod bounds;
pub mod constructions;
pub mod error;
pub mod experiments;
pub mod group;
pub mod hypergraph;
pub mod kset;
pub mod perm;

pub use bitset::VertexSet;
pub use error::{Error, Result};
pub use group::PermGroup;
pub use hypergraph::{Hypergraph, TransversalHypergraph};
pub use perm::{Permutation, PointBase};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/hypergraphs.md")]
    mod hypergraphs {}
    #[doc = include_str!("../../../book/src/catalog.md")]
    mod catalog {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
