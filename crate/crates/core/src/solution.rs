//! Solution representation and constrained dominance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance used by [`identical`] when no other value is configured.
pub const DEFAULT_IDENTICAL_EPS: f64 = 1e-12;

/// An evaluated point: decision vector, objectives (all minimized) and
/// constraint violations, plus the NSGA-II bookkeeping fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    /// Nonnegative violation per constraint; zero means satisfied.
    pub cv: Vec<f64>,
    pub rank: usize,
    pub crowding: f64,
}

impl Solution {
    pub fn new(x: Vec<f64>, f: Vec<f64>, cv: Vec<f64>) -> Self {
        Self {
            x,
            f,
            cv,
            rank: 0,
            crowding: 0.0,
        }
    }

    /// Unconstrained solution, mostly useful in tests and toy problems.
    pub fn from_objectives(f: Vec<f64>) -> Self {
        Self::new(Vec::new(), f, Vec::new())
    }

    pub fn is_feasible(&self) -> bool {
        self.cv.iter().all(|&v| v == 0.0)
    }

    /// Unweighted sum of the constraint violations.
    pub fn total_violation(&self) -> f64 {
        self.cv.iter().sum()
    }
}

fn check_same_shape(a: &Solution, b: &Solution) -> Result<()> {
    Error::check_len("objective vector", a.f.len(), b.f.len())?;
    Error::check_len("constraint vector", a.cv.len(), b.cv.len())?;
    Ok(())
}

/// Pareto dominance on raw objective vectors (minimization).
pub fn dominates_objectives(a: &[f64], b: &[f64]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut strictly_better = false;
    for (&fa, &fb) in a.iter().zip(b) {
        if fa > fb {
            return false;
        }
        if fa < fb {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Constrained domination: feasible beats infeasible, smaller total
/// violation wins between two infeasible solutions, and plain Pareto
/// dominance applies between feasible ones.
pub fn dominates(a: &Solution, b: &Solution) -> Result<bool> {
    check_same_shape(a, b)?;
    Ok(dominates_unchecked(a, b))
}

/// [`dominates`] without the shape check, for hot loops where every
/// solution comes from the same problem.
pub(crate) fn dominates_unchecked(a: &Solution, b: &Solution) -> bool {
    match (a.is_feasible(), b.is_feasible()) {
        (true, false) => true,
        (false, true) => false,
        (false, false) => a.total_violation() < b.total_violation(),
        (true, true) => dominates_objectives(&a.f, &b.f),
    }
}

/// True when both the objectives and the decision variables agree
/// componentwise within `eps`.
pub fn identical(a: &Solution, b: &Solution, eps: f64) -> Result<bool> {
    Error::check_len("objective vector", a.f.len(), b.f.len())?;
    Error::check_len("decision vector", a.x.len(), b.x.len())?;
    Ok(identical_unchecked(a, b, eps))
}

pub(crate) fn identical_unchecked(a: &Solution, b: &Solution, eps: f64) -> bool {
    let close = |u: &[f64], v: &[f64]| u.iter().zip(v).all(|(p, q)| (p - q).abs() <= eps);
    close(&a.f, &b.f) && close(&a.x, &b.x)
}
