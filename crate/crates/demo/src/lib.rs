//! Browser bindings. Every export takes plain numbers and returns a JSON
//! string; errors come back as `{"error": "..."}`.

use nsga2_fh::nsga2::{polynomial_mutation, sbx_crossover};
use nsga2_fh::{
    evolve, problem_by_name, ArchiveFullPolicy, EngineParams, HypergridConfig, Problem, Solution,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

#[derive(Serialize)]
struct Fronts {
    problem: String,
    population: Vec<Vec<f64>>,
    archive: Vec<Vec<f64>>,
    archive_cells: usize,
}

#[derive(Serialize)]
struct TraceRow {
    generation: usize,
    filled: usize,
    empty: usize,
    total: usize,
    packed: bool,
}

#[derive(Serialize)]
struct Histogram {
    /// Left bin edges, then the right edge of the last bin.
    edges: Vec<f64>,
    empirical: Vec<f64>,
    analytic: Vec<f64>,
}

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| error_json(&e.to_string())),
        Err(e) => error_json(&e),
    }
}

fn error_json(msg: &str) -> String {
    serde_json::json!({ "error": msg }).to_string()
}

fn grid_for(problem: &str, n_cells_max: usize, n_sols_max: usize) -> Result<HypergridConfig, String> {
    let delta = match problem {
        "vnt" => vec![0.1, 0.01, 0.1],
        _ => vec![0.1, 0.1],
    };
    HypergridConfig::new(vec![0.0; delta.len()], delta, n_cells_max, n_sols_max)
        .map_err(|e| e.to_string())
}

fn objectives(v: &[Solution]) -> Vec<Vec<f64>> {
    v.iter().map(|s| s.f.clone()).collect()
}

/// Final population front and archive of one NSGA-II-FH run.
#[wasm_bindgen]
pub fn run_fronts(problem: &str, pop_size: usize, generations: usize, seed: u64) -> String {
    to_json((|| {
        let p = problem_by_name(problem, 0.0).map_err(|e| e.to_string())?;
        let params = EngineParams {
            pop_size,
            generations,
            seed,
            ..EngineParams::default()
        };
        let grid = grid_for(problem, 100_000, 10)?;
        let r = evolve(&p, &params, Some(&grid), ArchiveFullPolicy::WarnAndContinue)
            .map_err(|e| e.to_string())?;
        let archive = r.archive.as_ref().expect("archive enabled");
        Ok(Fronts {
            problem: p.name().to_string(),
            population: objectives(&r.population_front()),
            archive: objectives(&archive.extract_solutions()),
            archive_cells: archive.cells().len(),
        })
    })())
}

/// Per-generation cell counts of a CTP1 run (N = 40) with a given cell cap.
#[wasm_bindgen]
pub fn cell_trace(n_cells_max: usize, n_sols_max: usize, generations: usize, seed: u64) -> String {
    to_json((|| {
        let p = problem_by_name("ctp1", 0.0).map_err(|e| e.to_string())?;
        let params = EngineParams {
            pop_size: 40,
            generations,
            seed,
            ..EngineParams::default()
        };
        let grid = grid_for("ctp1", n_cells_max, n_sols_max)?;
        let r = evolve(&p, &params, Some(&grid), ArchiveFullPolicy::WarnAndContinue)
            .map_err(|e| e.to_string())?;
        Ok(r.trace
            .iter()
            .map(|g| {
                let s = g.stats.unwrap_or_default();
                TraceRow {
                    generation: g.generation,
                    filled: s.filled,
                    empty: s.empty,
                    total: s.total,
                    packed: g.packed,
                }
            })
            .collect::<Vec<_>>())
    })())
}

/// Sampled vs analytic density of the SBX spread factor (`kind = "sbx"`,
/// parents 0.4 and 0.6) or of the polynomial mutation step from the centre
/// of [0, 1] (`kind = "mutation"`).
#[wasm_bindgen]
pub fn operator_histogram(kind: &str, eta: f64, draws: usize, bins: usize, seed: u64) -> String {
    to_json(histogram(kind, eta, draws, bins, seed))
}

fn histogram(kind: &str, eta: f64, draws: usize, bins: usize, seed: u64) -> Result<Histogram, String> {
    if !(eta >= 0.0) || draws == 0 || bins == 0 {
        return Err("eta must be >= 0, draws and bins > 0".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi, samples, density): (f64, f64, Vec<f64>, Box<dyn Fn(f64) -> f64>) = match kind {
        "sbx" => {
            let s = (0..draws)
                .map(|_| {
                    let (a, b) = sbx_crossover(&[0.4], &[0.6], 1.0, eta, &[0.0], &[1.0], &mut rng);
                    (b[0] - a[0]).abs() / 0.2
                })
                .collect();
            let d = move |b: f64| {
                if b <= 1.0 {
                    0.5 * (eta + 1.0) * b.powf(eta)
                } else {
                    0.5 * (eta + 1.0) * b.powf(-(eta + 2.0))
                }
            };
            (0.0, 2.0, s, Box::new(d))
        }
        "mutation" => {
            let s = (0..draws)
                .map(|_| {
                    let mut x = [0.5];
                    polynomial_mutation(&mut x, 1.0, eta, &[0.0], &[1.0], &mut rng);
                    x[0] - 0.5
                })
                .collect();
            let norm = 2.0 * (1.0 - 0.5f64.powf(eta + 1.0));
            let d = move |t: f64| (eta + 1.0) * (1.0 - t.abs()).powf(eta) / norm;
            (-0.5, 0.5, s, Box::new(d))
        }
        other => return Err(format!("unknown operator {other:?}")),
    };
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for s in samples {
        let k = ((s - lo) / width).floor();
        if k >= 0.0 && (k as usize) < bins {
            counts[k as usize] += 1;
        }
    }
    let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
    Ok(Histogram {
        empirical: counts
            .iter()
            .map(|&c| c as f64 / (draws as f64 * width))
            .collect(),
        analytic: edges[..bins].iter().map(|&e| density(e + 0.5 * width)).collect(),
        edges,
    })
}
