//! Benchmark problems.
//!
//! All objectives are minimized. Definitions:
//!
//! * **VNT** (Viennet), `x, y ∈ [-3, 3]`, with `r = x² + y²`:
//!   `f1 = r/2 + sin r`,
//!   `f2 = (3x - 2y + 4)²/8 + (x - y + 1)²/27 + 15`,
//!   `f3 = 1/(r + 1) - 1.1·exp(-r)`. No constraints.
//! * **CTP1** (two constraints), `x1, x2 ∈ [0, 1]`, `g = 1 + x2`:
//!   `f1 = x1`, `f2 = g·exp(-f1/g)`, subject to
//!   `f2 - a_j·exp(-b_j·f1) ≥ 0` with `(a, b) = (0.858, 0.541), (0.728, 0.295)`.
//!   Violation is reported as `max(0, a_j·exp(-b_j·f1) - f2)`.

use std::fmt;
use std::sync::Arc;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::solution::Solution;

/// Objective and constraint-violation values for one decision vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub f: Vec<f64>,
    pub cv: Vec<f64>,
}

/// A box-constrained multi-objective problem with a deterministic evaluator.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;
    fn n_objectives(&self) -> usize;
    fn n_constraints(&self) -> usize;
    fn lower(&self) -> &[f64];
    fn upper(&self) -> &[f64];
    fn evaluate(&self, x: &[f64]) -> Result<Evaluation>;

    fn n_vars(&self) -> usize {
        self.lower().len()
    }

    /// Bumped whenever the problem definition changes; part of the
    /// reference-front cache key.
    fn version(&self) -> u32 {
        1
    }
}

impl<P: Problem + ?Sized> Problem for Box<P> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn n_objectives(&self) -> usize {
        (**self).n_objectives()
    }
    fn n_constraints(&self) -> usize {
        (**self).n_constraints()
    }
    fn lower(&self) -> &[f64] {
        (**self).lower()
    }
    fn upper(&self) -> &[f64] {
        (**self).upper()
    }
    fn evaluate(&self, x: &[f64]) -> Result<Evaluation> {
        (**self).evaluate(x)
    }
    fn version(&self) -> u32 {
        (**self).version()
    }
}

/// Checks the box and dimension contract shared by all evaluators.
pub fn check_in_box(x: &[f64], lower: &[f64], upper: &[f64]) -> Result<()> {
    Error::check_len("decision vector", lower.len(), x.len())?;
    for (i, ((&v, &lo), &hi)) in x.iter().zip(lower).zip(upper).enumerate() {
        if !(lo..=hi).contains(&v) {
            return Err(Error::OutOfBounds {
                index: i,
                value: v,
                lower: lo,
                upper: hi,
            });
        }
    }
    Ok(())
}

/// Validates bounds for a problem definition.
pub fn check_bounds(lower: &[f64], upper: &[f64]) -> Result<()> {
    if lower.is_empty() {
        return Err(Error::InvalidConfig("problem needs at least one variable".into()));
    }
    Error::check_len("upper bounds", lower.len(), upper.len())?;
    if lower
        .iter()
        .zip(upper)
        .any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo < hi))
    {
        return Err(Error::InvalidConfig("bounds must be finite with lower < upper".into()));
    }
    Ok(())
}

/// Evaluates `x` and packages the result as a [`Solution`], enforcing the
/// evaluator contract (shapes, finite objectives, nonnegative violations).
pub fn evaluate_solution<P: Problem + ?Sized>(problem: &P, x: Vec<f64>) -> Result<Solution> {
    let Evaluation { f, cv } = problem.evaluate(&x)?;
    Error::check_len("objective vector", problem.n_objectives(), f.len())?;
    Error::check_len("constraint vector", problem.n_constraints(), cv.len())?;
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("objective vector"));
    }
    if cv.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::Evaluation(format!(
            "{}: constraint violations must be >= 0, got {cv:?}",
            problem.name()
        )));
    }
    Ok(Solution::new(x, f, cv))
}

#[derive(Debug, Clone)]
pub struct Vnt {
    lower: [f64; 2],
    upper: [f64; 2],
}

impl Default for Vnt {
    fn default() -> Self {
        Self {
            lower: [-3.0; 2],
            upper: [3.0; 2],
        }
    }
}

/// The three Viennet objectives at `(x, y)`, without the box check.
pub fn vnt_objectives(x: f64, y: f64) -> [f64; 3] {
    let r = x * x + y * y;
    [
        0.5 * r + r.sin(),
        (3.0 * x - 2.0 * y + 4.0).powi(2) / 8.0 + (x - y + 1.0).powi(2) / 27.0 + 15.0,
        1.0 / (r + 1.0) - 1.1 * (-r).exp(),
    ]
}

impl Problem for Vnt {
    fn name(&self) -> &str {
        "vnt"
    }
    fn n_objectives(&self) -> usize {
        3
    }
    fn n_constraints(&self) -> usize {
        0
    }
    fn lower(&self) -> &[f64] {
        &self.lower
    }
    fn upper(&self) -> &[f64] {
        &self.upper
    }
    fn evaluate(&self, x: &[f64]) -> Result<Evaluation> {
        check_in_box(x, &self.lower, &self.upper)?;
        Ok(Evaluation {
            f: vnt_objectives(x[0], x[1]).to_vec(),
            cv: Vec::new(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Ctp1 {
    lower: [f64; 2],
    upper: [f64; 2],
}

impl Ctp1 {
    /// `(a_j, b_j)` of the constraint boundaries `a_j·exp(-b_j·f1)`.
    pub const CONSTRAINTS: [(f64, f64); 2] = [(0.858, 0.541), (0.728, 0.295)];
}

impl Default for Ctp1 {
    fn default() -> Self {
        Self {
            lower: [0.0; 2],
            upper: [1.0; 2],
        }
    }
}

impl Problem for Ctp1 {
    fn name(&self) -> &str {
        "ctp1"
    }
    fn n_objectives(&self) -> usize {
        2
    }
    fn n_constraints(&self) -> usize {
        2
    }
    fn lower(&self) -> &[f64] {
        &self.lower
    }
    fn upper(&self) -> &[f64] {
        &self.upper
    }
    fn evaluate(&self, x: &[f64]) -> Result<Evaluation> {
        check_in_box(x, &self.lower, &self.upper)?;
        let g = 1.0 + x[1];
        let f1 = x[0];
        let f2 = g * (-f1 / g).exp();
        let cv = Self::CONSTRAINTS
            .iter()
            .map(|&(a, b)| (a * (-b * f1).exp() - f2).max(0.0))
            .collect();
        Ok(Evaluation {
            f: vec![f1, f2],
            cv,
        })
    }
}

/// Wraps a problem so every evaluation also blocks for a fixed wall-clock
/// delay. Stands in for an expensive external simulator.
pub struct Delayed<P> {
    inner: P,
    delay: Duration,
}

impl<P: Problem> Delayed<P> {
    pub fn new(inner: P, delay_ms: f64) -> Result<Self> {
        if !(delay_ms >= 0.0 && delay_ms.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "delay_ms must be finite and >= 0, got {delay_ms}"
            )));
        }
        Ok(Self {
            inner,
            delay: Duration::from_secs_f64(delay_ms / 1000.0),
        })
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }
}

/// Convenience for `Delayed::new`.
pub fn with_delay<P: Problem>(inner: P, delay_ms: f64) -> Result<Delayed<P>> {
    Delayed::new(inner, delay_ms)
}

impl<P: Problem> Problem for Delayed<P> {
    fn name(&self) -> &str {
        self.inner.name()
    }
    fn n_objectives(&self) -> usize {
        self.inner.n_objectives()
    }
    fn n_constraints(&self) -> usize {
        self.inner.n_constraints()
    }
    fn lower(&self) -> &[f64] {
        self.inner.lower()
    }
    fn upper(&self) -> &[f64] {
        self.inner.upper()
    }
    fn evaluate(&self, x: &[f64]) -> Result<Evaluation> {
        let out = self.inner.evaluate(x)?;
        if !self.delay.is_zero() {
            std::thread::sleep(self.delay);
        }
        Ok(out)
    }
    fn version(&self) -> u32 {
        self.inner.version()
    }
}

type EvalFn = dyn Fn(&[f64]) -> Evaluation + Send + Sync;

/// Problem defined by a closure; handy for toy instances.
#[derive(Clone)]
pub struct FnProblem {
    name: String,
    n_objectives: usize,
    n_constraints: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    eval: Arc<EvalFn>,
}

impl FnProblem {
    pub fn new(
        name: impl Into<String>,
        lower: Vec<f64>,
        upper: Vec<f64>,
        n_objectives: usize,
        n_constraints: usize,
        eval: impl Fn(&[f64]) -> Evaluation + Send + Sync + 'static,
    ) -> Result<Self> {
        check_bounds(&lower, &upper)?;
        if n_objectives < 2 {
            return Err(Error::InvalidConfig("need at least two objectives".into()));
        }
        Ok(Self {
            name: name.into(),
            n_objectives,
            n_constraints,
            lower,
            upper,
            eval: Arc::new(eval),
        })
    }
}

impl fmt::Debug for FnProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnProblem")
            .field("name", &self.name)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .finish_non_exhaustive()
    }
}

impl Problem for FnProblem {
    fn name(&self) -> &str {
        &self.name
    }
    fn n_objectives(&self) -> usize {
        self.n_objectives
    }
    fn n_constraints(&self) -> usize {
        self.n_constraints
    }
    fn lower(&self) -> &[f64] {
        &self.lower
    }
    fn upper(&self) -> &[f64] {
        &self.upper
    }
    fn evaluate(&self, x: &[f64]) -> Result<Evaluation> {
        check_in_box(x, &self.lower, &self.upper)?;
        Ok((self.eval)(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    /// Default grid resolution per decision variable for the reference front.
    pub reference_grid: usize,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "vnt",
        reference_grid: 501,
    },
    CatalogEntry {
        name: "ctp1",
        reference_grid: 501,
    },
];

pub fn catalog_entry(name: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownProblem(name.to_string()))
}

/// Looks a problem up by name, optionally wrapped with an evaluation delay.
pub fn problem_by_name(name: &str, delay_ms: f64) -> Result<Box<dyn Problem>> {
    let entry = catalog_entry(name)?;
    let base: Box<dyn Problem> = match entry.name {
        "vnt" => Box::new(Vnt::default()),
        "ctp1" => Box::new(Ctp1::default()),
        _ => unreachable!("catalog entry without constructor"),
    };
    if delay_ms == 0.0 {
        Ok(base)
    } else {
        Ok(Box::new(Delayed::new(base, delay_ms)?))
    }
}
