//! Fixed-hypergrid external archive.
//!
//! Objective space is cut into boxes addressed by integer indices relative
//! to a fixed reference point and spacing, so the grid has no outer
//! boundary and never has to be recomputed. Only boxes that have held a
//! solution are materialized, as an ordered list of at most `n_cells_max`
//! cells, each holding at most `n_sols_max` mutually non-dominated
//! solutions. Cells emptied by dominance stay in the list (vacant) until
//! room is needed, at which point the list is packed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solution::{dominates_unchecked, identical_unchecked, Solution, DEFAULT_IDENTICAL_EPS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypergridConfig {
    /// Reference value per objective.
    pub f_ref: Vec<f64>,
    /// Cell spacing per objective; strictly positive.
    pub delta_f: Vec<f64>,
    pub n_cells_max: usize,
    pub n_sols_max: usize,
    pub eps_identical: f64,
}

impl HypergridConfig {
    pub fn new(
        f_ref: Vec<f64>,
        delta_f: Vec<f64>,
        n_cells_max: usize,
        n_sols_max: usize,
    ) -> Result<Self> {
        let config = Self {
            f_ref,
            delta_f,
            n_cells_max,
            n_sols_max,
            eps_identical: DEFAULT_IDENTICAL_EPS,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_eps_identical(mut self, eps: f64) -> Self {
        self.eps_identical = eps;
        self
    }

    pub fn n_objectives(&self) -> usize {
        self.f_ref.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.f_ref.is_empty() {
            return bad("hypergrid needs at least one objective".into());
        }
        if self.f_ref.len() != self.delta_f.len() {
            return bad(format!(
                "f_ref has {} entries but delta_f has {}",
                self.f_ref.len(),
                self.delta_f.len()
            ));
        }
        if self.f_ref.iter().any(|v| !v.is_finite()) {
            return bad("f_ref must be finite".into());
        }
        if let Some(d) = self.delta_f.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
            return bad(format!("delta_f entries must be finite and > 0, got {d}"));
        }
        if self.n_cells_max == 0 || self.n_sols_max == 0 {
            return bad("n_cells_max and n_sols_max must be >= 1".into());
        }
        if !(self.eps_identical >= 0.0) {
            return bad("eps_identical must be >= 0".into());
        }
        Ok(())
    }
}

/// Integer address of a hypergrid cell, one signed index per objective.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellIndex(pub Vec<i64>);

impl CellIndex {
    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

/// `floor((f_k - f_ref_k) / delta_f_k)` for every objective. Unbounded in
/// both directions.
pub fn cell_index(f: &[f64], config: &HypergridConfig) -> Result<CellIndex> {
    Error::check_len("objective vector", config.n_objectives(), f.len())?;
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("objective vector"));
    }
    Ok(CellIndex(
        f.iter()
            .zip(&config.f_ref)
            .zip(&config.delta_f)
            .map(|((&v, &r), &d)| ((v - r) / d).floor() as i64)
            .collect(),
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    index: CellIndex,
    slots: Vec<Solution>,
}

impl Cell {
    pub fn index(&self) -> &CellIndex {
        &self.index
    }

    pub fn solutions(&self) -> &[Solution] {
        &self.slots
    }

    pub fn is_occupied(&self) -> bool {
        !self.slots.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateOutcome {
    /// Candidate violates a constraint; infeasible points are never stored.
    RejectedInfeasible,
    RejectedDominated,
    RejectedIdentical,
    Inserted,
    /// The target cell was full and one of its solutions was dropped at random.
    InsertedWithEviction,
    /// A new cell was needed at capacity; vacant cells were packed first.
    InsertedAfterPack,
    /// A new cell was needed, the cell list is at capacity and no cell is
    /// vacant. The archive is left exactly as it was.
    ArchiveFull,
}

impl UpdateOutcome {
    pub fn is_inserted(self) -> bool {
        matches!(
            self,
            Self::Inserted | Self::InsertedWithEviction | Self::InsertedAfterPack
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ArchiveStats {
    pub filled: usize,
    pub empty: usize,
    pub total: usize,
}

/// One stored solution together with the address of its cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveRecord {
    pub cell: Vec<i64>,
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub cv: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Archive {
    config: HypergridConfig,
    cells: Vec<Cell>,
    rng: ChaCha8Rng,
    packs: usize,
}

impl Archive {
    /// Empty archive. `seed` drives in-cell eviction only.
    pub fn new(config: HypergridConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            cells: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            packs: 0,
        })
    }

    pub fn config(&self) -> &HypergridConfig {
        &self.config
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Number of stored solutions.
    pub fn len(&self) -> usize {
        self.cells.iter().map(|c| c.slots.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|c| c.slots.is_empty())
    }

    /// How many times a pack has removed at least one cell.
    pub fn pack_count(&self) -> usize {
        self.packs
    }

    pub fn solutions(&self) -> impl Iterator<Item = &Solution> {
        self.cells.iter().flat_map(|c| c.slots.iter())
    }

    pub fn extract_solutions(&self) -> Vec<Solution> {
        self.solutions().cloned().collect()
    }

    pub fn records(&self) -> Vec<ArchiveRecord> {
        self.cells
            .iter()
            .flat_map(|c| {
                c.slots.iter().map(move |s| ArchiveRecord {
                    cell: c.index.0.clone(),
                    x: s.x.clone(),
                    f: s.f.clone(),
                    cv: s.cv.clone(),
                })
            })
            .collect()
    }

    pub fn stats(&self) -> ArchiveStats {
        let filled = self.cells.iter().filter(|c| c.is_occupied()).count();
        ArchiveStats {
            filled,
            empty: self.cells.len() - filled,
            total: self.cells.len(),
        }
    }

    /// Drops every vacant cell, keeping occupied cells in order. Returns the
    /// number of cells removed.
    pub fn pack(&mut self) -> usize {
        let before = self.cells.len();
        self.cells.retain(Cell::is_occupied);
        let removed = before - self.cells.len();
        if removed > 0 {
            self.packs += 1;
        }
        removed
    }

    fn find_cell(&self, index: &CellIndex) -> Option<usize> {
        self.cells.iter().position(|c| &c.index == index)
    }

    /// Offers `candidate` to the archive.
    ///
    /// Screening happens against every stored solution before anything is
    /// modified: a dominating or identical stored solution rejects the
    /// candidate outright. Otherwise all stored solutions the candidate
    /// dominates are removed and the candidate is placed in its cell.
    pub fn update(&mut self, candidate: &Solution) -> Result<UpdateOutcome> {
        let index = cell_index(&candidate.f, &self.config)?;
        if let Some(s) = self.solutions().next() {
            Error::check_len("decision vector", s.x.len(), candidate.x.len())?;
            Error::check_len("constraint vector", s.cv.len(), candidate.cv.len())?;
        }
        if !candidate.is_feasible() {
            return Ok(UpdateOutcome::RejectedInfeasible);
        }

        let eps = self.config.eps_identical;
        for stored in self.solutions() {
            if dominates_unchecked(stored, candidate) {
                return Ok(UpdateOutcome::RejectedDominated);
            }
            if identical_unchecked(stored, candidate, eps) {
                return Ok(UpdateOutcome::RejectedIdentical);
            }
        }

        let target = self.find_cell(&index);
        if target.is_none() && self.cells.len() >= self.config.n_cells_max {
            // Vacancy must exist either now or once the dominated solutions go.
            let any_vacancy = self
                .cells
                .iter()
                .any(|c| c.slots.iter().all(|s| dominates_unchecked(candidate, s)));
            if !any_vacancy {
                return Ok(UpdateOutcome::ArchiveFull);
            }
        }

        for cell in &mut self.cells {
            cell.slots.retain(|s| !dominates_unchecked(candidate, s));
        }

        let outcome = match target {
            Some(pos) => {
                let cell = &mut self.cells[pos];
                let evicted = cell.slots.len() >= self.config.n_sols_max;
                if evicted {
                    let victim = self.rng.random_range(0..cell.slots.len());
                    cell.slots.remove(victim);
                }
                cell.slots.push(candidate.clone());
                if evicted {
                    UpdateOutcome::InsertedWithEviction
                } else {
                    UpdateOutcome::Inserted
                }
            }
            None => {
                let packed = if self.cells.len() >= self.config.n_cells_max {
                    self.pack();
                    true
                } else {
                    false
                };
                self.cells.push(Cell {
                    index,
                    slots: vec![candidate.clone()],
                });
                if packed {
                    UpdateOutcome::InsertedAfterPack
                } else {
                    UpdateOutcome::Inserted
                }
            }
        };
        Ok(outcome)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg2(n_cells_max: usize, n_sols_max: usize) -> HypergridConfig {
        HypergridConfig::new(vec![0.0, 0.0], vec![1.0, 1.0], n_cells_max, n_sols_max).unwrap()
    }

    fn sol(f: &[f64]) -> Solution {
        Solution::new(f.to_vec(), f.to_vec(), vec![])
    }

    #[test]
    fn cell_index_examples() {
        let c = HypergridConfig::new(vec![0.0, 0.0], vec![0.1, 0.01], 10, 1).unwrap();
        assert_eq!(cell_index(&[0.05, 0.005], &c).unwrap().0, vec![0, 0]);
        assert_eq!(cell_index(&[0.25, 0.033], &c).unwrap().0, vec![2, 3]);
        let c1 = HypergridConfig::new(vec![0.0], vec![0.1], 10, 1).unwrap();
        assert_eq!(cell_index(&[-0.05], &c1).unwrap().0, vec![-1]);
    }

    #[test]
    fn cell_index_rejects_bad_input() {
        let c = cfg2(4, 1);
        assert!(matches!(
            cell_index(&[f64::NAN, 0.0], &c),
            Err(Error::NonFinite(_))
        ));
        assert!(cell_index(&[f64::INFINITY, 0.0], &c).is_err());
        assert!(cell_index(&[0.0], &c).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(HypergridConfig::new(vec![0.0], vec![0.0], 1, 1).is_err());
        assert!(HypergridConfig::new(vec![0.0], vec![-1.0], 1, 1).is_err());
        assert!(HypergridConfig::new(vec![0.0, 0.0], vec![1.0], 1, 1).is_err());
        assert!(HypergridConfig::new(vec![0.0], vec![1.0], 0, 1).is_err());
        assert!(HypergridConfig::new(vec![0.0], vec![1.0], 1, 0).is_err());
        assert!(HypergridConfig::new(vec![0.0], vec![1.0], 1, 1)
            .unwrap()
            .with_eps_identical(-1.0)
            .validate()
            .is_err());
    }

    #[test]
    fn first_insertion() {
        let mut a = Archive::new(cfg2(4, 2), 0).unwrap();
        assert_eq!(a.update(&sol(&[1.5, 1.5])).unwrap(), UpdateOutcome::Inserted);
        assert_eq!(a.cells().len(), 1);
        assert_eq!(a.cells()[0].solutions().len(), 1);
    }

    #[test]
    fn dominating_candidate_replaces() {
        let mut a = Archive::new(cfg2(4, 2), 0).unwrap();
        a.update(&sol(&[2.0, 2.0])).unwrap();
        let c = sol(&[1.0, 1.0]);
        assert_eq!(a.update(&c).unwrap(), UpdateOutcome::Inserted);
        assert_eq!(a.extract_solutions(), vec![c]);
        // the old cell is kept, now vacant
        assert_eq!(
            a.stats(),
            ArchiveStats {
                filled: 1,
                empty: 1,
                total: 2
            }
        );
    }

    #[test]
    fn dominated_candidate_rejected() {
        let mut a = Archive::new(cfg2(4, 2), 0).unwrap();
        a.update(&sol(&[1.0, 1.0])).unwrap();
        let before = a.clone();
        assert_eq!(
            a.update(&sol(&[2.0, 2.0])).unwrap(),
            UpdateOutcome::RejectedDominated
        );
        assert_eq!(a, before);
    }

    #[test]
    fn identical_candidate_rejected() {
        let mut a = Archive::new(cfg2(4, 2), 0).unwrap();
        let s = sol(&[1.0, 1.0]);
        a.update(&s).unwrap();
        let before = a.clone();
        assert_eq!(a.update(&s).unwrap(), UpdateOutcome::RejectedIdentical);
        assert_eq!(a, before);
    }

    #[test]
    fn infeasible_candidate_rejected() {
        let mut a = Archive::new(cfg2(4, 2), 0).unwrap();
        let s = Solution::new(vec![0.0], vec![1.0, 1.0], vec![0.3]);
        assert_eq!(a.update(&s).unwrap(), UpdateOutcome::RejectedInfeasible);
        assert!(a.cells().is_empty());
    }

    #[test]
    fn mismatched_candidate_is_an_error() {
        let mut a = Archive::new(cfg2(4, 2), 0).unwrap();
        assert!(a.update(&sol(&[1.0, 1.0, 1.0])).is_err());
    }

    // Three solutions, hand-enumerated through every branch:
    // (0.5,5.5) -> cell (0,5) new; (5.5,0.5) -> cell (5,0) new;
    // (3.5,3.5) -> cell (3,3), not present, 2 cells at cap 2, neither vacant.
    #[test]
    fn archive_full_leaves_state_intact() {
        let mut a = Archive::new(cfg2(2, 1), 0).unwrap();
        assert_eq!(a.update(&sol(&[0.5, 5.5])).unwrap(), UpdateOutcome::Inserted);
        assert_eq!(a.update(&sol(&[5.5, 0.5])).unwrap(), UpdateOutcome::Inserted);
        let before = a.clone();
        assert_eq!(a.update(&sol(&[3.5, 3.5])).unwrap(), UpdateOutcome::ArchiveFull);
        assert_eq!(a, before);
    }

    #[test]
    fn pack_makes_room() {
        let mut a = Archive::new(cfg2(2, 1), 0).unwrap();
        a.update(&sol(&[0.5, 5.5])).unwrap();
        assert_eq!(
            a.update(&sol(&[5.5, 5.5])).unwrap(),
            UpdateOutcome::RejectedDominated
        );
        a.update(&sol(&[5.5, 0.5])).unwrap();
        // (0.4, 5.4) lands in (0,5) and knocks out (0.5,5.5); same cell, no pack
        assert_eq!(a.update(&sol(&[0.4, 5.4])).unwrap(), UpdateOutcome::Inserted);
        // (0.2, 0.2) dominates both -> both cells vacate, needs new cell (0,0)
        assert_eq!(
            a.update(&sol(&[0.2, 0.2])).unwrap(),
            UpdateOutcome::InsertedAfterPack
        );
        assert_eq!(
            a.stats(),
            ArchiveStats {
                filled: 1,
                empty: 0,
                total: 1
            }
        );
        assert_eq!(a.pack_count(), 1);
    }

    #[test]
    fn full_cell_evicts_one() {
        let mut a = Archive::new(cfg2(4, 2), 7).unwrap();
        assert_eq!(a.update(&sol(&[0.1, 0.9])).unwrap(), UpdateOutcome::Inserted);
        assert_eq!(a.update(&sol(&[0.5, 0.5])).unwrap(), UpdateOutcome::Inserted);
        assert_eq!(
            a.update(&sol(&[0.9, 0.1])).unwrap(),
            UpdateOutcome::InsertedWithEviction
        );
        let stored = a.extract_solutions();
        assert_eq!(stored.len(), 2);
        assert_eq!(stored[1].f, vec![0.9, 0.1]);
    }

    fn ten_cell_archive(vacant: &[usize]) -> Archive {
        // ten mutually non-dominated cells along the anti-diagonal, then
        // clear the requested ones directly
        let mut a = Archive::new(cfg2(10, 4), 0).unwrap();
        for i in 0..10 {
            let v = i as f64 + 0.5;
            a.update(&sol(&[v, 9.5 - i as f64])).unwrap();
        }
        for &i in vacant {
            let mut cell = a.cells[i].clone();
            cell.slots.clear();
            a.cells[i] = cell;
        }
        a
    }

    #[test]
    fn pack_removes_vacant_cells_in_order() {
        let mut a = ten_cell_archive(&[2, 5, 8]);
        let occupied: Vec<_> = a
            .cells()
            .iter()
            .filter(|c| c.is_occupied())
            .map(|c| c.index().clone())
            .collect();
        assert_eq!(a.pack(), 3);
        assert_eq!(a.cells().len(), 7);
        let after: Vec<_> = a.cells().iter().map(|c| c.index().clone()).collect();
        assert_eq!(after, occupied);
        assert_eq!(a.pack(), 0);
        assert_eq!(a.stats().empty, 0);
    }

    #[test]
    fn pack_everything() {
        let mut a = ten_cell_archive(&(0..10).collect::<Vec<_>>());
        assert_eq!(a.pack(), 10);
        assert!(a.cells().is_empty());
    }

    #[test]
    fn extract_front_of_three() {
        let mut a = Archive::new(cfg2(10, 1), 0).unwrap();
        let front = [sol(&[1.0, 3.0]), sol(&[2.0, 2.0]), sol(&[3.0, 1.0])];
        for s in &front {
            a.update(s).unwrap();
        }
        assert_eq!(a.extract_solutions(), front.to_vec());
        assert!(Archive::new(cfg2(1, 1), 0)
            .unwrap()
            .extract_solutions()
            .is_empty());
    }
}
