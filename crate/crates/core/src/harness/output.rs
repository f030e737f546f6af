//! CSV layouts. Column order is fixed:
//!
//! * fronts: `x1..xL, f1..fM, cv1..cvJ`
//! * archive fronts: `c1..cM, x1..xL, f1..fM, cv1..cvJ` (cell index first)
//! * cell traces: `generation, filled, empty, total, packed`
//! * timings: `generation, eval_s, archive_s, engine_s`

use std::path::Path;

use crate::archive::Archive;
use crate::error::{Error, Result};
use crate::nsga2::RunResult;
use crate::solution::Solution;

fn names(prefix: &str, n: usize) -> impl Iterator<Item = String> + '_ {
    (1..=n).map(move |k| format!("{prefix}{k}"))
}

fn solution_fields(s: &Solution) -> impl Iterator<Item = String> + '_ {
    s.x.iter().chain(&s.f).chain(&s.cv).map(f64::to_string)
}

fn finish(mut w: csv::Writer<Vec<u8>>) -> Result<String> {
    w.flush().map_err(|e| Error::io("<memory>", e))?;
    let bytes = w
        .into_inner()
        .map_err(|e| Error::io("<memory>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Front CSV with header. `shape` is `(L, M, J)` so an empty front still
/// gets a proper header.
pub fn front_csv(solutions: &[Solution], shape: (usize, usize, usize)) -> Result<String> {
    let (l, m, j) = shape;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(names("x", l).chain(names("f", m)).chain(names("cv", j)))?;
    for s in solutions {
        w.write_record(solution_fields(s))?;
    }
    finish(w)
}

pub fn archive_csv(archive: &Archive, shape: (usize, usize, usize)) -> Result<String> {
    let (l, m, j) = shape;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(
        names("c", m)
            .chain(names("x", l))
            .chain(names("f", m))
            .chain(names("cv", j)),
    )?;
    for cell in archive.cells() {
        for s in cell.solutions() {
            w.write_record(
                cell.index()
                    .as_slice()
                    .iter()
                    .map(i64::to_string)
                    .chain(solution_fields(s)),
            )?;
        }
    }
    finish(w)
}

/// One row per generation: `generation,filled,empty,total,packed` with
/// `packed` as 0/1. Fails if the run had no archive attached.
pub fn emit_cell_trace(result: &RunResult) -> Result<String> {
    if result.archive.is_none() {
        return Err(Error::TracingDisabled);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["generation", "filled", "empty", "total", "packed"])?;
    for g in &result.trace {
        let s = g.stats.ok_or(Error::TracingDisabled)?;
        w.write_record([
            g.generation.to_string(),
            s.filled.to_string(),
            s.empty.to_string(),
            s.total.to_string(),
            u8::from(g.packed).to_string(),
        ])?;
    }
    finish(w)
}

pub fn timings_csv(result: &RunResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["generation", "eval_s", "archive_s", "engine_s"])?;
    for g in &result.trace {
        w.write_record([
            g.generation.to_string(),
            g.eval_time.as_secs_f64().to_string(),
            g.archive_time.as_secs_f64().to_string(),
            g.engine_time.as_secs_f64().to_string(),
        ])?;
    }
    finish(w)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::archive::HypergridConfig;
    use crate::nsga2::{evolve, EngineParams};
    use crate::problems::Ctp1;

    #[test]
    fn front_layout() {
        let s = Solution::new(vec![0.5, 0.25], vec![1.0, 2.5], vec![0.0, 0.125]);
        let text = front_csv(&[s], (2, 2, 2)).unwrap();
        assert_eq!(text, "x1,x2,f1,f2,cv1,cv2\n0.5,0.25,1,2.5,0,0.125\n");
        assert_eq!(front_csv(&[], (1, 2, 0)).unwrap(), "x1,f1,f2\n");
    }

    #[test]
    fn archive_layout() {
        let cfg = HypergridConfig::new(vec![0.0, 0.0], vec![0.5, 0.5], 4, 2).unwrap();
        let mut a = Archive::new(cfg, 0).unwrap();
        a.update(&Solution::new(vec![0.1], vec![0.75, -0.25], vec![]))
            .unwrap();
        let text = archive_csv(&a, (1, 2, 0)).unwrap();
        assert_eq!(text, "c1,c2,x1,f1,f2\n1,-1,0.1,0.75,-0.25\n");
    }

    #[test]
    fn cell_trace_rows_balance() {
        let cfg = HypergridConfig::new(vec![0.0; 2], vec![0.1, 0.1], 25, 2).unwrap();
        let params = EngineParams {
            pop_size: 40,
            generations: 20,
            ..EngineParams::default()
        };
        let r = evolve(&Ctp1::default(), &params, Some(&cfg), Default::default()).unwrap();
        let text = emit_cell_trace(&r).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("generation,filled,empty,total,packed"));
        let rows: Vec<Vec<usize>> = lines
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        assert_eq!(rows.len(), 20);
        for r in rows {
            assert_eq!(r[3], r[1] + r[2]);
        }

        let plain = evolve(&Ctp1::default(), &params, None, Default::default()).unwrap();
        assert!(matches!(emit_cell_trace(&plain), Err(Error::TracingDisabled)));
    }
}
