//! Structured systems: zero/free patterns, dynamic graphs, generic ranks,
//! SFO and target controllability.

pub mod dynamic;
pub mod pattern;
pub mod realization;
pub mod sfo;
pub mod target;

pub use dynamic::DynamicGraph;
pub use pattern::{output_reachable_set, PatternMatrix, PatternTriple, SystemDigraph};
pub use realization::{
    field_realization, real_realization, sample_functional_observability, GenericSample,
};
pub use sfo::{
    generic_obs_rank, generic_rank_with_functional, is_sfo, is_structurally_observable,
    max_linking_size, sfo_selfloop_fastpath, FunctionalStateCheck, SfoReport,
};
pub use target::{target_controllability, target_controllable_nminus1, TargetReport};
