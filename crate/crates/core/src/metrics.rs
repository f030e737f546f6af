//! Grid-sampled reference fronts and front-quality measures.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::problems::Problem;
use crate::solution::{dominates_objectives, dominates_unchecked, Solution};

/// Default cap on the number of grid evaluations for a reference front.
pub const DEFAULT_GRID_CAP: u128 = 4_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceFront {
    pub problem: String,
    pub grid_per_dim: usize,
    /// Objective vectors, mutually non-dominated, lexicographically sorted.
    pub points: Vec<Vec<f64>>,
}

/// Non-dominated subset of `points` (exact duplicates collapsed), sorted
/// lexicographically.
///
/// A point can only be dominated by one that sorts before it, so one pass
/// over the sorted list against the front found so far is enough.
pub fn nondominated_filter(mut points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    points.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(p, q)| p.total_cmp(q))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut front: Vec<Vec<f64>> = Vec::new();
    for p in points {
        let covered = front
            .iter()
            .rev()
            .any(|q| q == &p || dominates_objectives(q, &p));
        if !covered {
            front.push(p);
        }
    }
    front
}

/// Evaluates a full `grid_per_dim^L` lattice over the decision box (bounds
/// included), drops infeasible points and keeps the non-dominated rest.
pub fn build_reference_front<P: Problem + ?Sized>(
    problem: &P,
    grid_per_dim: usize,
    cap: u128,
) -> Result<ReferenceFront> {
    if grid_per_dim < 2 {
        return Err(Error::InvalidConfig(format!(
            "grid_per_dim must be >= 2, got {grid_per_dim}"
        )));
    }
    let (lower, upper) = (problem.lower(), problem.upper());
    let dims = lower.len();
    let evaluations = (grid_per_dim as u128)
        .checked_pow(dims as u32)
        .unwrap_or(u128::MAX);
    if evaluations > cap {
        return Err(Error::GridTooLarge { evaluations, cap });
    }
    let step: Vec<f64> = lower
        .iter()
        .zip(upper)
        .map(|(lo, hi)| (hi - lo) / (grid_per_dim - 1) as f64)
        .collect();

    let mut counter = vec![0usize; dims];
    let mut feasible = Vec::new();
    for _ in 0..evaluations {
        let x: Vec<f64> = counter
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if c == grid_per_dim - 1 {
                    upper[i]
                } else {
                    lower[i] + c as f64 * step[i]
                }
            })
            .collect();
        let e = problem.evaluate(&x)?;
        if e.cv.iter().all(|&v| v == 0.0) {
            feasible.push(e.f);
        }
        for c in counter.iter_mut() {
            *c += 1;
            if *c < grid_per_dim {
                break;
            }
            *c = 0;
        }
    }

    Ok(ReferenceFront {
        problem: problem.name().to_string(),
        grid_per_dim,
        points: nondominated_filter(feasible),
    })
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt()
}

/// Mean distance from each point to its nearest reference point.
pub fn generational_distance_points(front: &[Vec<f64>], reference: &[Vec<f64>]) -> Result<f64> {
    if front.is_empty() {
        return Err(Error::EmptyInput("generational distance (front)"));
    }
    if reference.is_empty() {
        return Err(Error::EmptyInput("generational distance (reference)"));
    }
    let m = reference[0].len();
    let mut total = 0.0;
    for p in front {
        Error::check_len("objective vector", m, p.len())?;
        total += reference
            .iter()
            .map(|r| euclidean(p, r))
            .fold(f64::INFINITY, f64::min);
    }
    Ok(total / front.len() as f64)
}

pub fn generational_distance(front: &[Solution], reference: &ReferenceFront) -> Result<f64> {
    let objs: Vec<Vec<f64>> = front.iter().map(|s| s.f.clone()).collect();
    generational_distance_points(&objs, &reference.points)
}

pub fn is_mutually_nondominating(set: &[Solution]) -> bool {
    set.iter().enumerate().all(|(i, a)| {
        set.iter()
            .enumerate()
            .all(|(j, b)| i == j || !dominates_unchecked(a, b))
    })
}

/// Cache key for a problem definition: name, version, shape and bounds.
pub fn problem_fingerprint<P: Problem + ?Sized>(problem: &P) -> String {
    let mut h = Sha256::new();
    h.update(problem.name().as_bytes());
    h.update(problem.version().to_le_bytes());
    h.update((problem.n_objectives() as u64).to_le_bytes());
    h.update((problem.n_constraints() as u64).to_le_bytes());
    for v in problem.lower().iter().chain(problem.upper()) {
        h.update(v.to_le_bytes());
    }
    h.finalize()
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Reference fronts stored as CSV files, one per (problem, grid, fingerprint).
#[derive(Debug, Clone)]
pub struct ReferenceFrontCache {
    dir: PathBuf,
}

impl ReferenceFrontCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path_for<P: Problem + ?Sized>(&self, problem: &P, grid_per_dim: usize) -> PathBuf {
        self.dir.join(format!(
            "{}_g{}_{}.csv",
            problem.name(),
            grid_per_dim,
            problem_fingerprint(problem)
        ))
    }

    pub fn load_or_build<P: Problem + ?Sized>(
        &self,
        problem: &P,
        grid_per_dim: usize,
        cap: u128,
    ) -> Result<ReferenceFront> {
        let path = self.path_for(problem, grid_per_dim);
        if path.exists() {
            let points = read_points(&path)?;
            return Ok(ReferenceFront {
                problem: problem.name().to_string(),
                grid_per_dim,
                points,
            });
        }
        let front = build_reference_front(problem, grid_per_dim, cap)?;
        fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        write_points(&path, &front.points)?;
        Ok(front)
    }
}

pub fn write_points(path: &Path, points: &[Vec<f64>]) -> Result<()> {
    let m = points.first().map_or(0, Vec::len);
    let mut w = csv::Writer::from_path(path)?;
    w.write_record((1..=m).map(|k| format!("f{k}")))?;
    for p in points {
        w.write_record(p.iter().map(f64::to_string))?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_points(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_path(path)?;
    r.records()
        .map(|rec| {
            rec?.iter()
                .map(|v| {
                    v.parse::<f64>().map_err(|e| {
                        Error::InvalidConfig(format!("{}: bad number `{v}`: {e}", path.display()))
                    })
                })
                .collect()
        })
        .collect()
}
