use std::fmt::Write as _;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{median, RunConfig};
use crate::error::{Error, Result};
use crate::nsga2::{evolve, EngineParams};
use crate::problems::problem_by_name;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub generations: usize,
    /// Median wall-clock seconds over the repetitions.
    pub nsga2_s: f64,
    pub nsga2_fh_s: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingTable {
    pub problem: String,
    pub pop_size: usize,
    pub delay_ms: f64,
    pub repetitions: usize,
    pub rows: Vec<TimingRow>,
}

impl TimingTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("generations,nsga2_s,nsga2_fh_s,ratio\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                r.generations, r.nsga2_s, r.nsga2_fh_s, r.ratio
            );
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} (N = {}, delay = {} ms, median of {})\n",
            self.problem, self.pop_size, self.delay_ms, self.repetitions
        );
        let _ = writeln!(
            s,
            "{:>8}  {:>14}  {:>14}  {:>8}",
            "N_gen", "NSGA-II", "NSGA-II-FH", "ratio"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>8}  {:>14}  {:>14}  {:>8.3}",
                r.generations,
                fmt_secs(r.nsga2_s),
                fmt_secs(r.nsga2_fh_s),
                r.ratio
            );
        }
        s
    }
}

fn fmt_secs(s: f64) -> String {
    if s < 1.0 {
        format!("{:.2} ms", s * 1e3)
    } else {
        format!("{s:.2} s")
    }
}

/// The plain and archive-enabled variants of `config`.
pub fn timing_pair(config: &RunConfig) -> (RunConfig, RunConfig) {
    (
        RunConfig {
            archive: false,
            ..config.clone()
        },
        RunConfig {
            archive: true,
            ..config.clone()
        },
    )
}

/// Times plain NSGA-II against NSGA-II-FH for every entry of
/// `timing_generations`. The two configs must be identical apart from the
/// `archive` switch.
pub fn compare_timing(plain: &RunConfig, with_archive: &RunConfig) -> Result<TimingTable> {
    plain.validate()?;
    with_archive.validate()?;
    if plain.archive || !with_archive.archive {
        return Err(Error::InvalidConfig(
            "compare_timing needs one config without and one with the archive".into(),
        ));
    }
    let stripped = RunConfig {
        archive: false,
        ..with_archive.clone()
    };
    if &stripped != plain {
        return Err(Error::InvalidConfig(
            "timing configs may differ only in the archive switch".into(),
        ));
    }

    let problem = problem_by_name(&plain.problem, plain.delay_ms)?;
    let hypergrid = with_archive.hypergrid(problem.n_objectives())?;
    let policy = with_archive.policy();

    let mut rows = Vec::with_capacity(plain.timing_generations.len());
    for &generations in &plain.timing_generations {
        let mut plain_s = Vec::new();
        let mut fh_s = Vec::new();
        for rep in 0..plain.repetitions {
            let params = EngineParams {
                generations,
                seed: plain.seed.wrapping_add(rep as u64),
                ..plain.engine_params()
            };
            let a = evolve(&problem, &params, None, policy)?.timings.total;
            let b = evolve(&problem, &params, hypergrid.as_ref(), policy)?
                .timings
                .total;
            plain_s.push(secs(a));
            fh_s.push(secs(b));
        }
        let nsga2_s = median(&plain_s).unwrap_or(0.0);
        let nsga2_fh_s = median(&fh_s).unwrap_or(0.0);
        rows.push(TimingRow {
            generations,
            nsga2_s,
            nsga2_fh_s,
            ratio: nsga2_fh_s / nsga2_s,
        });
    }
    Ok(TimingTable {
        problem: plain.problem.clone(),
        pop_size: plain.pop_size,
        delay_ms: plain.delay_ms,
        repetitions: plain.repetitions,
        rows,
    })
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}
