use nsga2_fh::{
    evolve, is_mutually_nondominating, with_delay, ArchiveFullPolicy, EngineParams,
    HypergridConfig, Vnt,
};

fn vnt_grid() -> HypergridConfig {
    HypergridConfig::new(vec![0.0; 3], vec![0.1, 0.01, 0.1], 1000, 10).unwrap()
}

#[test]
fn vnt_archive_outgrows_population() {
    let params = EngineParams {
        pop_size: 60,
        generations: 100,
        seed: 1,
        ..EngineParams::default()
    };
    let r = evolve(&Vnt::default(), &params, Some(&vnt_grid()), ArchiveFullPolicy::Abort).unwrap();
    let archive = r.archive.unwrap().extract_solutions();
    assert!(archive.len() > 60, "archive {}", archive.len());
    assert!(is_mutually_nondominating(&archive));
    assert_eq!(r.trace.len(), 100);
}

#[test]
fn wall_clock_split_accounts_for_total() {
    // Evaluations dominate so the untimed bookkeeping between stopwatches is
    // negligible against the total.
    let params = EngineParams {
        pop_size: 20,
        generations: 10,
        seed: 3,
        ..EngineParams::default()
    };
    let r = evolve(
        &with_delay(Vnt::default(), 2.0).unwrap(),
        &params,
        Some(&vnt_grid()),
        ArchiveFullPolicy::WarnAndContinue,
    )
    .unwrap();
    let t = r.timings;
    let parts = (t.evaluation + t.archive + t.engine).as_secs_f64();
    let total = t.total.as_secs_f64();
    assert!(parts <= total * 1.0001);
    assert!((total - parts) / total < 0.02, "parts {parts} total {total}");
    let per_gen: f64 = r
        .trace
        .iter()
        .map(|g| (g.eval_time + g.archive_time + g.engine_time).as_secs_f64())
        .sum();
    assert!(per_gen <= parts);
}
