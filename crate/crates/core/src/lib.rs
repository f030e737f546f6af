//! Real-coded NSGA-II with a fixed-hypergrid external archive.
//!
//! The archive keeps every non-dominated solution the population visits,
//! bucketed into cells of a boundary-free grid in objective space, and never
//! takes part in selection. The crate provides:
//!
//! * [`solution`]: solution type and constrained dominance
//! * [`archive`]: the fixed-hypergrid archive (cell addressing, dominance
//!   filtered insertion, packing, statistics)
//! * [`nsga2`]: the engine (sorting, crowding, SBX, polynomial mutation) and
//!   the archive-enabled run loop
//! * [`problems`]: VNT, CTP1 and an evaluation-delay wrapper
//! * [`metrics`]: grid reference fronts and generational distance
//! * [`harness`]: config-driven batch runs, CSV/JSON output, timing tables
//!
//! ```
//! use nsga2_fh::{evolve, ArchiveFullPolicy, EngineParams, HypergridConfig, Vnt};
//!
//! let grid = HypergridConfig::new(vec![0.0; 3], vec![0.1, 0.01, 0.1], 1000, 10).unwrap();
//! let params = EngineParams { generations: 20, ..EngineParams::default() };
//! let run = evolve(&Vnt::default(), &params, Some(&grid), ArchiveFullPolicy::default()).unwrap();
//! assert!(run.archive.unwrap().len() > 0);
//! ```

pub mod archive;
mod clock;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod nsga2;
pub mod problems;
pub mod solution;

pub use archive::{
    cell_index, Archive, ArchiveRecord, ArchiveStats, Cell, CellIndex, HypergridConfig,
    UpdateOutcome,
};
pub use error::{Error, Result};
pub use metrics::{
    build_reference_front, generational_distance, is_mutually_nondominating, ReferenceFront,
};
pub use nsga2::{evolve, evolve_observed, ArchiveFullPolicy, EngineParams, RunResult};
pub use problems::{problem_by_name, with_delay, Ctp1, Evaluation, FnProblem, Problem, Vnt};
pub use solution::{dominates, identical, Solution};
