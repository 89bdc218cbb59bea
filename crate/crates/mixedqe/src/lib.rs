//! Classification engine for mixed quasi-étale surfaces.
//!
//! A mixed quasi-étale quotient is `X = (C x C)/G` where `C` is a curve of
//! genus at least 2 and the finite group `G` exchanges the two factors and
//! acts freely outside finitely many points. Given target invariants
//! `(p_g, q, K^2)` this crate enumerates every admissible combination of
//! singularity basket, signature, group `G^0`, generating vector and unsplit
//! degree-2 extension `G`, computes the singular locus and the invariants of
//! the minimal resolution `S`, reduces modulo Hurwitz-move equivalence, and
//! emits classification tables together with a report of skipped branches.
//!
//! Module map:
//! - [`group`]: multiplication-table group arithmetic and isomorphism testing
//! - [`catalogue`]: pluggable database of the finite groups of each order
//! - [`sing`]: Hirzebruch-Jung fractions and quotient-singularity classes
//! - [`search`]: basket and signature enumeration with arithmetic pruning
//! - [`covers`]: generating vectors and Hurwitz-move orbit reduction
//! - [`extensions`]: unsplit degree-2 extensions realizing the mixed action
//! - [`surface`]: singular locus, basket assembly and surface invariants
//! - [`albanese`]: Albanese fibre genus for irregularity-1 candidates
//! - [`pipeline`]: the full search, single-candidate analysis and emitters

pub mod albanese;
pub mod catalogue;
pub mod covers;
pub mod error;
pub mod extensions;
pub mod group;
pub mod perm;
pub mod pipeline;
pub mod rat;
pub mod search;
pub mod sing;
pub mod surface;

pub use error::{
    AlbaneseError, CatalogueError, CoverError, ExtensionError, GroupError, PipelineError,
    SingError, SurfaceError,
};
pub use group::{build_group, FiniteGroup, GroupMap, Subgroup};
pub use perm::Perm;
pub use rat::Rat;
