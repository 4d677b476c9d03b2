//! Lower-bound pipelines, code artifacts and the known-bounds registry.

mod artifact;
mod bound;
mod blocks;
mod linkage;
mod multilevel;
mod named;
mod packing;
mod partition;
mod registry;

use thiserror::Error;

use crate::gf::GfError;
use crate::rankmetric::RankError;
use crate::skeleton::SkeletonError;
use crate::subspace::SubspaceError;

pub use artifact::{
    emit_lifted, lift_frame, ArtifactMeta, CodeArtifact, CodeSpec, Component, ComponentKind, PackedStore,
};
pub use bound::*;
pub use blocks::{
    check_ab, construction1_poly, construction1_size, construction2_coset_families, construction2_poly,
    emit_construction1, emit_product, whole_space,
};
pub use linkage::linkage_bound;
pub use multilevel::{multilevel_construct, multilevel_poly, pattern_size, pattern_size_poly};
pub use named::{
    assemble_named, canonical_name, eq_target, multilevel_named, partition_5_2, skeleton_11_4_4, skeleton_11_4_4_defective, skeleton_15_4_4,
    skeleton_6_4_3, skeleton_total, EqTarget, NamedOptions, NamedOutcome, NAMED,
};
pub use packing::{
    all_ferrers_scheme, coset_packing, coset_packing_construct, eq663_packing, table1, table2_scheme, PackingRow,
    PackingScheme, Table1Row,
};
pub use partition::{greedy_partition, greedy_partition_of, parallelism, refine_to_multiset, Partition};
pub use registry::{registry_e_lookup, registry_int, registry_lookup, registry_poly, RegistryError};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("too large to emit: {0}")]
    TooLarge(String),
    #[error("packing scheme overuses cosets of {0}")]
    OverusedCosets(String),
    #[error("unknown pipeline {0}")]
    UnknownName(String),
    #[error("no partition found: {0}")]
    Search(String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error(transparent)]
    Field(#[from] GfError),
}
