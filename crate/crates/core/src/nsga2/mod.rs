//! Real-coded NSGA-II and its composition with the fixed-hypergrid archive.
//!
//! The archive is pure storage: it is updated with every member of each new
//! parent population and never feeds back into selection. It draws its
//! randomness from a separately seeded stream, so enabling it leaves the
//! population trajectory bit-for-bit unchanged.

mod engine;
pub mod operators;
pub mod sorting;

pub use engine::{
    archive_seed, evolve, evolve_observed, ArchiveFullPolicy, EngineParams, GenerationRecord,
    RunResult, RunTimings, UpdateCounts,
};
pub use operators::{polynomial_mutation, sbx_crossover};
pub use sorting::{
    assign_crowding_distance, crowded_tournament, crowding_distances, environmental_selection,
    fast_nondominated_sort,
};
