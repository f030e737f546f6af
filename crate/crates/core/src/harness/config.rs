use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::archive::HypergridConfig;
use crate::error::{Error, Result};
use crate::nsga2::{ArchiveFullPolicy, EngineParams};
use crate::problems::catalog_entry;
use crate::solution::DEFAULT_IDENTICAL_EPS;

/// Experiment definition, read from a flat TOML document. Every key is
/// optional; see the field docs for defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Catalog name: `vnt` or `ctp1`. Default `vnt`.
    pub problem: String,
    /// Extra wall-clock delay per evaluation in milliseconds. Default 0.
    pub delay_ms: f64,

    /// Default 60.
    pub pop_size: usize,
    /// Default 100.
    pub generations: usize,
    /// Default 0.8.
    pub p_c: f64,
    /// Default `1 / n_vars` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_m: Option<f64>,
    /// Default 10.
    pub eta_c: f64,
    /// Default 10.
    pub eta_m: f64,
    /// Base seed; repetition `i` uses `seed + i`. Default 1.
    pub seed: u64,
    /// Default 1.
    pub repetitions: usize,

    /// Attach the fixed-hypergrid archive. Default true.
    pub archive: bool,
    /// Per-objective reference; empty means 0 for every objective.
    pub f_ref: Vec<f64>,
    /// Per-objective spacing; empty means 0.1 for every objective.
    pub delta_f: Vec<f64>,
    /// Default 1000.
    pub n_cells_max: usize,
    /// Default 10.
    pub n_sols_max: usize,
    /// Default 1e-12.
    pub eps_identical: f64,
    /// Abort the run (exit code 3) instead of freezing the archive when it
    /// fills up. Default false.
    pub strict_archive_full: bool,

    /// Default `results`.
    pub out_dir: PathBuf,
    /// Write final-population and archive fronts. Default true.
    pub trace_fronts: bool,
    /// Write per-generation cell statistics. Default true.
    pub trace_cells: bool,
    /// Write wall-clock timings. These vary between runs, so they are off
    /// by default to keep output trees reproducible.
    pub trace_timings: bool,

    /// Grid points per decision variable for the reference front used in
    /// generational-distance reporting; 0 disables it. Default 0.
    pub reference_grid: usize,
    /// Default `reference_fronts`.
    pub reference_cache: PathBuf,

    /// Generation counts swept by `compare-timing`. Default 100, 200, 300, 400.
    pub timing_generations: Vec<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let engine = EngineParams::default();
        Self {
            problem: "vnt".into(),
            delay_ms: 0.0,
            pop_size: engine.pop_size,
            generations: engine.generations,
            p_c: engine.p_c,
            p_m: engine.p_m,
            eta_c: engine.eta_c,
            eta_m: engine.eta_m,
            seed: engine.seed,
            repetitions: 1,
            archive: true,
            f_ref: Vec::new(),
            delta_f: Vec::new(),
            n_cells_max: 1000,
            n_sols_max: 10,
            eps_identical: DEFAULT_IDENTICAL_EPS,
            strict_archive_full: false,
            out_dir: PathBuf::from("results"),
            trace_fronts: true,
            trace_cells: true,
            trace_timings: false,
            reference_grid: 0,
            reference_cache: PathBuf::from("reference_fronts"),
            timing_generations: vec![100, 200, 300, 400],
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let config: Self = toml::from_str(s)?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn engine_params(&self) -> EngineParams {
        EngineParams {
            pop_size: self.pop_size,
            generations: self.generations,
            p_c: self.p_c,
            p_m: self.p_m,
            eta_c: self.eta_c,
            eta_m: self.eta_m,
            seed: self.seed,
        }
    }

    pub fn policy(&self) -> ArchiveFullPolicy {
        if self.strict_archive_full {
            ArchiveFullPolicy::Abort
        } else {
            ArchiveFullPolicy::WarnAndContinue
        }
    }

    /// Hypergrid for a problem with `n_objectives` objectives, or `None`
    /// when the archive is disabled.
    pub fn hypergrid(&self, n_objectives: usize) -> Result<Option<HypergridConfig>> {
        if !self.archive {
            return Ok(None);
        }
        let fill = |v: &[f64], default: f64, what: &str| -> Result<Vec<f64>> {
            match v.len() {
                0 => Ok(vec![default; n_objectives]),
                n if n == n_objectives => Ok(v.to_vec()),
                n => Err(Error::InvalidConfig(format!(
                    "{what} has {n} entries but problem `{}` has {n_objectives} objectives",
                    self.problem
                ))),
            }
        };
        let config = HypergridConfig {
            f_ref: fill(&self.f_ref, 0.0, "f_ref")?,
            delta_f: fill(&self.delta_f, 0.1, "delta_f")?,
            n_cells_max: self.n_cells_max,
            n_sols_max: self.n_sols_max,
            eps_identical: self.eps_identical,
        };
        config.validate()?;
        Ok(Some(config))
    }

    pub fn validate(&self) -> Result<()> {
        catalog_entry(&self.problem)?;
        self.engine_params().validate()?;
        if self.repetitions == 0 {
            return Err(Error::InvalidConfig("repetitions must be >= 1".into()));
        }
        if !(self.delay_ms >= 0.0 && self.delay_ms.is_finite()) {
            return Err(Error::InvalidConfig("delay_ms must be finite and >= 0".into()));
        }
        if self.reference_grid == 1 {
            return Err(Error::InvalidConfig(
                "reference_grid must be 0 (off) or >= 2".into(),
            ));
        }
        if self.timing_generations.contains(&0) {
            return Err(Error::InvalidConfig(
                "timing_generations entries must be >= 1".into(),
            ));
        }
        if self.archive {
            let probe = HypergridConfig {
                f_ref: vec![0.0],
                delta_f: vec![1.0],
                n_cells_max: self.n_cells_max,
                n_sols_max: self.n_sols_max,
                eps_identical: self.eps_identical,
            };
            probe.validate()?;
            if self.f_ref.iter().any(|v| !v.is_finite())
                || self.delta_f.iter().any(|d| !(d.is_finite() && *d > 0.0))
            {
                return Err(Error::InvalidConfig(
                    "f_ref must be finite and delta_f entries finite and > 0".into(),
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_document_gives_defaults() {
        assert_eq!(RunConfig::from_toml_str("").unwrap(), RunConfig::default());
    }

    #[test]
    fn rejects_bad_values() {
        for doc in [
            "generations = 0",
            "pop_size = 7",
            "problem = \"zdt9\"",
            "repetitions = 0",
            "n_cells_max = 0",
            "delta_f = [0.1, 0.0, 0.1]",
            "timing_generations = [100, 0]",
            "bogus_key = 1",
        ] {
            assert!(RunConfig::from_toml_str(doc).is_err(), "{doc}");
        }
    }

    #[test]
    fn hypergrid_dimension_mismatch() {
        let c = RunConfig::from_toml_str("delta_f = [0.1, 0.01]").unwrap();
        assert!(matches!(c.hypergrid(3), Err(Error::InvalidConfig(_))));
        assert_eq!(c.hypergrid(2).unwrap().unwrap().delta_f, vec![0.1, 0.01]);
        let off = RunConfig::from_toml_str("archive = false").unwrap();
        assert!(off.hypergrid(3).unwrap().is_none());
    }

    #[test]
    fn defaults_fill_hypergrid() {
        let g = RunConfig::default().hypergrid(3).unwrap().unwrap();
        assert_eq!(g.f_ref, vec![0.0; 3]);
        assert_eq!(g.delta_f, vec![0.1; 3]);
        assert_eq!((g.n_cells_max, g.n_sols_max), (1000, 10));
    }

    fn arb_config() -> impl Strategy<Value = RunConfig> {
        (
            prop_oneof![Just("vnt"), Just("ctp1")],
            (2usize..50).prop_map(|n| n * 2),
            1usize..500,
            0.0f64..=1.0,
            prop::option::of(0.0f64..=1.0),
            0u64..1_000_000,
            any::<bool>(),
            prop::collection::vec(0.001f64..1.0, 0..4),
            (1usize..2000, 1usize..20),
            0.0f64..50.0,
        )
            .prop_map(
                |(problem, pop_size, generations, p_c, p_m, seed, archive, delta_f, caps, delay)| {
                    RunConfig {
                        problem: problem.into(),
                        pop_size,
                        generations,
                        p_c,
                        p_m,
                        seed,
                        archive,
                        delta_f,
                        n_cells_max: caps.0,
                        n_sols_max: caps.1,
                        delay_ms: delay,
                        ..RunConfig::default()
                    }
                },
            )
    }

    proptest! {
        #[test]
        fn toml_roundtrip(c in arb_config()) {
            let text = c.to_toml_string().unwrap();
            let back = RunConfig::from_toml_str(&text).unwrap();
            prop_assert_eq!(back, c);
        }
    }
}
