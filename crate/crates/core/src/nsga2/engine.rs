use std::time::Duration;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::operators::{polynomial_mutation, sbx_crossover};
use super::sorting::{
    assign_crowding_distance, crowded_tournament, environmental_selection, fast_nondominated_sort,
};
use crate::archive::{Archive, ArchiveStats, HypergridConfig, UpdateOutcome};
use crate::clock::Stopwatch;
use crate::error::{Error, Result};
use crate::problems::{check_bounds, evaluate_solution, Problem};
use crate::solution::Solution;

/// Mixed into the run seed to seed the archive's own eviction stream.
const ARCHIVE_SEED_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn archive_seed(run_seed: u64) -> u64 {
    run_seed ^ ARCHIVE_SEED_SALT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineParams {
    pub pop_size: usize,
    pub generations: usize,
    pub p_c: f64,
    /// `None` means `1 / n_vars`.
    pub p_m: Option<f64>,
    pub eta_c: f64,
    pub eta_m: f64,
    pub seed: u64,
}

impl Default for EngineParams {
    fn default() -> Self {
        Self {
            pop_size: 60,
            generations: 100,
            p_c: 0.8,
            p_m: None,
            eta_c: 10.0,
            eta_m: 10.0,
            seed: 1,
        }
    }
}

impl EngineParams {
    pub fn mutation_probability(&self, n_vars: usize) -> f64 {
        self.p_m.unwrap_or(1.0 / n_vars as f64)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.pop_size < 4 || !self.pop_size.is_multiple_of(2) {
            return bad(format!(
                "pop_size must be an even number >= 4, got {}",
                self.pop_size
            ));
        }
        if self.generations == 0 {
            return bad("generations must be >= 1".into());
        }
        if !(0.0..=1.0).contains(&self.p_c) {
            return bad(format!("p_c must lie in [0, 1], got {}", self.p_c));
        }
        if let Some(p_m) = self.p_m {
            if !(0.0..=1.0).contains(&p_m) {
                return bad(format!("p_m must lie in [0, 1], got {p_m}"));
            }
        }
        if !(self.eta_c > 0.0 && self.eta_m > 0.0) {
            return bad("distribution indices must be > 0".into());
        }
        Ok(())
    }
}

/// What to do when the archive reports that it is full.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArchiveFullPolicy {
    /// Log a warning, freeze the archive, keep evolving.
    #[default]
    WarnAndContinue,
    /// Abort the run with [`Error::ArchiveFull`].
    Abort,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct UpdateCounts {
    pub inserted: usize,
    pub evicted: usize,
    pub rejected: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub generation: usize,
    /// Cell statistics after this generation's archive update.
    pub stats: Option<ArchiveStats>,
    /// A pack happened during this generation's archive update.
    pub packed: bool,
    pub updates: UpdateCounts,
    pub eval_time: Duration,
    pub archive_time: Duration,
    pub engine_time: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RunTimings {
    pub total: Duration,
    pub evaluation: Duration,
    pub archive: Duration,
    pub engine: Duration,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub final_population: Vec<Solution>,
    pub archive: Option<Archive>,
    pub trace: Vec<GenerationRecord>,
    /// Generation at which the archive filled up and was frozen.
    pub archive_full_at: Option<usize>,
    pub timings: RunTimings,
}

impl RunResult {
    /// Rank-0 members of the final population.
    pub fn population_front(&self) -> Vec<Solution> {
        self.final_population
            .iter()
            .filter(|s| s.rank == 0)
            .cloned()
            .collect()
    }
}

/// Runs NSGA-II, with the fixed-hypergrid archive attached when
/// `archive_config` is given.
pub fn evolve<P: Problem + ?Sized>(
    problem: &P,
    params: &EngineParams,
    archive_config: Option<&HypergridConfig>,
    policy: ArchiveFullPolicy,
) -> Result<RunResult> {
    evolve_observed(problem, params, archive_config, policy, |_, _| {})
}

/// [`evolve`], calling `observer(generation, parents)` for the initial
/// population (generation 0) and after every environmental selection.
pub fn evolve_observed<P, F>(
    problem: &P,
    params: &EngineParams,
    archive_config: Option<&HypergridConfig>,
    policy: ArchiveFullPolicy,
    mut observer: F,
) -> Result<RunResult>
where
    P: Problem + ?Sized,
    F: FnMut(usize, &[Solution]),
{
    params.validate()?;
    let (lower, upper) = (problem.lower(), problem.upper());
    check_bounds(lower, upper)?;
    if problem.n_objectives() < 2 {
        return Err(Error::InvalidConfig("need at least two objectives".into()));
    }
    let mut archive = match archive_config {
        Some(cfg) => {
            Error::check_len(
                "hypergrid objectives",
                problem.n_objectives(),
                cfg.n_objectives(),
            )?;
            Some(Archive::new(cfg.clone(), archive_seed(params.seed))?)
        }
        None => None,
    };

    let run_clock = Stopwatch::start();
    let n = params.pop_size;
    let n_vars = problem.n_vars();
    let p_m = params.mutation_probability(n_vars);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut timings = RunTimings::default();

    let clock = Stopwatch::start();
    let initial: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            lower
                .iter()
                .zip(upper)
                .map(|(&lo, &hi)| rng.random_range(lo..=hi))
                .collect()
        })
        .collect();
    timings.engine += clock.elapsed();

    let clock = Stopwatch::start();
    let mut parents = evaluate_all(problem, initial)?;
    timings.evaluation += clock.elapsed();

    let clock = Stopwatch::start();
    for front in fast_nondominated_sort(&mut parents) {
        assign_crowding_distance(&mut parents, &front);
    }
    timings.engine += clock.elapsed();
    observer(0, &parents);

    let mut trace = Vec::with_capacity(params.generations);
    let mut archive_full_at = None;

    for generation in 1..=params.generations {
        let clock = Stopwatch::start();
        let mut offspring = Vec::with_capacity(n);
        while offspring.len() < n {
            let a = tournament(&parents, &mut rng);
            let b = tournament(&parents, &mut rng);
            let (mut c1, mut c2) =
                sbx_crossover(&a.x, &b.x, params.p_c, params.eta_c, lower, upper, &mut rng);
            polynomial_mutation(&mut c1, p_m, params.eta_m, lower, upper, &mut rng);
            polynomial_mutation(&mut c2, p_m, params.eta_m, lower, upper, &mut rng);
            offspring.push(c1);
            offspring.push(c2);
        }
        let mut engine_time = clock.elapsed();

        let clock = Stopwatch::start();
        let children = evaluate_all(problem, offspring)?;
        let eval_time = clock.elapsed();

        let clock = Stopwatch::start();
        let mut merged = std::mem::take(&mut parents);
        merged.extend(children);
        parents = environmental_selection(merged, n);
        engine_time += clock.elapsed();
        observer(generation, &parents);

        let clock = Stopwatch::start();
        let mut updates = UpdateCounts::default();
        let mut packed = false;
        if let Some(archive) = archive.as_mut().filter(|_| archive_full_at.is_none()) {
            let packs_before = archive.pack_count();
            for member in &parents {
                match archive.update(member)? {
                    UpdateOutcome::Inserted | UpdateOutcome::InsertedAfterPack => {
                        updates.inserted += 1
                    }
                    UpdateOutcome::InsertedWithEviction => {
                        updates.inserted += 1;
                        updates.evicted += 1;
                    }
                    UpdateOutcome::ArchiveFull => match policy {
                        ArchiveFullPolicy::Abort => {
                            return Err(Error::ArchiveFull { generation })
                        }
                        ArchiveFullPolicy::WarnAndContinue => {
                            warn!("archive full at generation {generation}; archiving stopped");
                            archive_full_at = Some(generation);
                            break;
                        }
                    },
                    _ => updates.rejected += 1,
                }
            }
            packed = archive.pack_count() > packs_before;
        }
        let stats = archive.as_ref().map(Archive::stats);
        let archive_time = if archive.is_some() {
            clock.elapsed()
        } else {
            Duration::ZERO
        };

        timings.engine += engine_time;
        timings.evaluation += eval_time;
        timings.archive += archive_time;
        trace.push(GenerationRecord {
            generation,
            stats,
            packed,
            updates,
            eval_time,
            archive_time,
            engine_time,
        });
    }
    timings.total = run_clock.elapsed();

    Ok(RunResult {
        final_population: parents,
        archive,
        trace,
        archive_full_at,
        timings,
    })
}

fn tournament<'a, R: Rng>(pop: &'a [Solution], rng: &mut R) -> &'a Solution {
    let a = rng.random_range(0..pop.len());
    let b = rng.random_range(0..pop.len());
    crowded_tournament(&pop[a], &pop[b])
}

// Sequential and in index order; the random stream never depends on
// evaluation timing.
fn evaluate_all<P: Problem + ?Sized>(problem: &P, xs: Vec<Vec<f64>>) -> Result<Vec<Solution>> {
    xs.into_iter()
        .map(|x| evaluate_solution(problem, x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{Evaluation, FnProblem, Vnt};

    fn toy() -> FnProblem {
        FnProblem::new("toy", vec![0.0], vec![2.0], 2, 0, |x| Evaluation {
            f: vec![x[0] * x[0], (x[0] - 2.0).powi(2)],
            cv: vec![],
        })
        .unwrap()
    }

    #[test]
    fn param_validation() {
        let ok = EngineParams::default();
        assert!(ok.validate().is_ok());
        for bad in [
            EngineParams { pop_size: 5, ..ok.clone() },
            EngineParams { pop_size: 2, ..ok.clone() },
            EngineParams { generations: 0, ..ok.clone() },
            EngineParams { p_c: 1.5, ..ok.clone() },
            EngineParams { p_m: Some(-0.1), ..ok.clone() },
            EngineParams { eta_c: 0.0, ..ok.clone() },
        ] {
            assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
        }
        assert_eq!(ok.mutation_probability(4), 0.25);
    }

    #[test]
    fn hypergrid_dimension_must_match() {
        let cfg = HypergridConfig::new(vec![0.0; 2], vec![0.1; 2], 10, 2).unwrap();
        let r = evolve(&Vnt::default(), &EngineParams::default(), Some(&cfg), Default::default());
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    // Regression lock: N = 4, one generation, seed 42 on the toy problem.
    #[test]
    fn tiny_run_is_locked() {
        let params = EngineParams {
            pop_size: 4,
            generations: 1,
            seed: 42,
            ..EngineParams::default()
        };
        let a = evolve(&toy(), &params, None, Default::default()).unwrap();
        let b = evolve(&toy(), &params, None, Default::default()).unwrap();
        assert_eq!(a.final_population, b.final_population);
        assert_eq!(a.trace.len(), 1);
        let xs: Vec<f64> = a.final_population.iter().map(|s| s.x[0]).collect();
        assert_eq!(xs, LOCKED_TINY_RUN);
    }

    const LOCKED_TINY_RUN: [f64; 4] = [
        1.900550815344968,
        0.5428516984524745,
        1.3637923846133426,
        0.8550328057130394,
    ];

    #[test]
    fn population_size_and_bounds_hold() {
        let params = EngineParams {
            pop_size: 20,
            generations: 30,
            seed: 3,
            ..EngineParams::default()
        };
        let mut sizes = Vec::new();
        let p = Vnt::default();
        evolve_observed(&p, &params, None, Default::default(), |_, pop| {
            sizes.push(pop.len());
            for s in pop {
                for (v, (lo, hi)) in s.x.iter().zip(p.lower().iter().zip(p.upper())) {
                    assert!(lo <= v && v <= hi);
                }
            }
        })
        .unwrap();
        assert_eq!(sizes.len(), 31);
        assert!(sizes.iter().all(|&s| s == 20));
    }

    #[test]
    fn archive_is_passive() {
        let cfg = HypergridConfig::new(vec![0.0; 3], vec![0.1, 0.01, 0.1], 50, 2).unwrap();
        let params = EngineParams {
            generations: 40,
            seed: 9,
            ..EngineParams::default()
        };
        let mut with = Vec::new();
        let mut without = Vec::new();
        let r = evolve_observed(&Vnt::default(), &params, Some(&cfg), Default::default(), |_, p| {
            with.push(p.to_vec())
        })
        .unwrap();
        evolve_observed(&Vnt::default(), &params, None, Default::default(), |_, p| {
            without.push(p.to_vec())
        })
        .unwrap();
        assert_eq!(with, without);
        assert!(!r.archive.unwrap().is_empty());
    }

    #[test]
    fn archive_full_policies() {
        let cfg = HypergridConfig::new(vec![0.0; 3], vec![0.01; 3], 3, 1).unwrap();
        let params = EngineParams {
            generations: 10,
            ..EngineParams::default()
        };
        let r = evolve(&Vnt::default(), &params, Some(&cfg), ArchiveFullPolicy::WarnAndContinue)
            .unwrap();
        let at = r.archive_full_at.expect("archive should fill");
        assert_eq!(r.trace.len(), 10);
        assert!(r.archive.unwrap().cells().len() <= 3);
        let strict = evolve(&Vnt::default(), &params, Some(&cfg), ArchiveFullPolicy::Abort);
        assert!(matches!(strict, Err(Error::ArchiveFull { generation }) if generation == at));
    }

    #[test]
    fn no_archive_means_no_archive_work() {
        let r = evolve(&toy(), &EngineParams::default(), None, Default::default()).unwrap();
        assert!(r.archive.is_none());
        assert_eq!(r.timings.archive, Duration::ZERO);
        assert!(r.trace.iter().all(|g| g.stats.is_none() && g.archive_time.is_zero()));
    }
}
