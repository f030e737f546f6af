//! Batch experiment runner: seeded repetitions, front and trace files, and
//! the archive-overhead timing comparison.
//!
//! Output tree of [`run`]:
//!
//! ```text
//! <out_dir>/report.json
//! <out_dir>/rep_000/final_front.csv     rank-0 members of the final population
//! <out_dir>/rep_000/archive_front.csv   archive contents (archive runs only)
//! <out_dir>/rep_000/cell_trace.csv      per-generation cell counts (archive runs only)
//! <out_dir>/rep_000/timings.csv         only with trace_timings
//! ```

mod config;
mod output;
mod timing;

use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use config::RunConfig;
pub use output::{archive_csv, emit_cell_trace, front_csv, timings_csv};
pub use timing::{compare_timing, timing_pair, TimingRow, TimingTable};

use crate::error::{Error, Result};
use crate::metrics::{generational_distance, ReferenceFrontCache, DEFAULT_GRID_CAP};
use crate::nsga2::{evolve, RunTimings};
use crate::problems::problem_by_name;
use output::write_file;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepetitionReport {
    pub index: usize,
    pub seed: u64,
    /// Paths relative to the output directory.
    pub files: Vec<PathBuf>,
    pub population_front_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub archive_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub archive_full_at: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gd_population: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gd_archive: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<RunTimings>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub median_population_front_size: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub median_archive_size: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub median_gd_population: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub median_gd_archive: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub repetitions: Vec<RepetitionReport>,
    pub summary: Summary,
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len().is_multiple_of(2) {
        0.5 * (v[mid - 1] + v[mid])
    } else {
        v[mid]
    })
}

/// Runs every repetition of `config`, writes the requested artifacts under
/// `config.out_dir` and returns the report (also written as `report.json`).
pub fn run(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let problem = problem_by_name(&config.problem, config.delay_ms)?;
    let shape = (
        problem.n_vars(),
        problem.n_objectives(),
        problem.n_constraints(),
    );
    let hypergrid = config.hypergrid(problem.n_objectives())?;
    let out = &config.out_dir;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;

    let reference = match config.reference_grid {
        0 => None,
        grid => Some(
            ReferenceFrontCache::new(&config.reference_cache).load_or_build(
                &problem,
                grid,
                DEFAULT_GRID_CAP,
            )?,
        ),
    };

    let mut reps = Vec::with_capacity(config.repetitions);
    for index in 0..config.repetitions {
        let seed = config.seed.wrapping_add(index as u64);
        let params = crate::nsga2::EngineParams {
            seed,
            ..config.engine_params()
        };
        let result = evolve(&problem, &params, hypergrid.as_ref(), config.policy())?;

        let rel_dir = PathBuf::from(format!("rep_{index:03}"));
        let dir = out.join(&rel_dir);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let mut files = Vec::new();
        let mut emit = |name: &str, contents: String| -> Result<()> {
            write_file(&dir.join(name), &contents)?;
            files.push(rel_dir.join(name));
            Ok(())
        };

        let pop_front = result.population_front();
        if config.trace_fronts {
            emit("final_front.csv", front_csv(&pop_front, shape)?)?;
        }
        if let Some(archive) = &result.archive {
            if config.trace_fronts {
                emit("archive_front.csv", archive_csv(archive, shape)?)?;
            }
            if config.trace_cells {
                emit("cell_trace.csv", emit_cell_trace(&result)?)?;
            }
        }
        if config.trace_timings {
            emit("timings.csv", timings_csv(&result)?)?;
        }

        let archive_solutions = result.archive.as_ref().map(|a| a.extract_solutions());
        let (gd_population, gd_archive) = match &reference {
            Some(r) => (
                Some(generational_distance(&pop_front, r)?),
                match &archive_solutions {
                    Some(s) if !s.is_empty() => Some(generational_distance(s, r)?),
                    _ => None,
                },
            ),
            None => (None, None),
        };

        reps.push(RepetitionReport {
            index,
            seed,
            files,
            population_front_size: pop_front.len(),
            archive_size: archive_solutions.as_ref().map(Vec::len),
            archive_full_at: result.archive_full_at,
            gd_population,
            gd_archive,
            timings: config.trace_timings.then_some(result.timings),
        });
    }

    let collect = |f: &dyn Fn(&RepetitionReport) -> Option<f64>| -> Vec<f64> {
        reps.iter().filter_map(f).collect()
    };
    let summary = Summary {
        median_population_front_size: median(&collect(&|r| {
            Some(r.population_front_size as f64)
        }))
        .unwrap_or(0.0),
        median_archive_size: median(&collect(&|r| r.archive_size.map(|v| v as f64))),
        median_gd_population: median(&collect(&|r| r.gd_population)),
        median_gd_archive: median(&collect(&|r| r.gd_archive)),
    };

    // Paths in the report are relative to its own directory.
    let report = RunReport {
        config: RunConfig {
            out_dir: PathBuf::from("."),
            ..config.clone()
        },
        repetitions: reps,
        summary,
    };
    let path = out.join("report.json");
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    write_file(&path, &json)?;
    Ok(report)
}
