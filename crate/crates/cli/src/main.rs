use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::error;
use nsga2_fh::harness::{self, RunConfig};
use nsga2_fh::metrics::{ReferenceFrontCache, DEFAULT_GRID_CAP};
use nsga2_fh::{problem_by_name, Error};

#[derive(Parser)]
#[command(name = "nsga2-fh", version, about = "NSGA-II with a fixed-hypergrid external archive")]
struct Cli {
    /// Abort a run when the archive fills up instead of freezing it.
    #[arg(long, global = true)]
    strict_archive_full: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config file.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        reps: Option<usize>,
    },
    /// Time NSGA-II against NSGA-II-FH over the config's `timing_generations`.
    CompareTiming {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build (or load from cache) the grid-sampled reference front of a problem.
    ReferenceFront {
        problem: String,
        #[arg(long, default_value_t = 501)]
        grid: usize,
        #[arg(long, default_value = "reference_fronts")]
        cache: PathBuf,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidConfig(_)
        | Error::UnknownProblem(_)
        | Error::ConfigParse(_)
        | Error::ConfigSerialize(_)
        | Error::GridTooLarge { .. } => 1,
        Error::ArchiveFull { .. } => 3,
        _ => 2,
    }
}

fn load(path: &Path, strict: bool) -> nsga2_fh::Result<RunConfig> {
    let mut config = RunConfig::load(path)?;
    config.strict_archive_full |= strict;
    Ok(config)
}

fn execute(cli: Cli) -> nsga2_fh::Result<()> {
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            reps,
        } => {
            let mut config = load(&config, cli.strict_archive_full)?;
            if let Some(out) = out {
                config.out_dir = out;
            }
            if let Some(seed) = seed {
                config.seed = seed;
            }
            if let Some(reps) = reps {
                config.repetitions = reps;
            }
            let report = harness::run(&config)?;
            for rep in &report.repetitions {
                let archive = rep
                    .archive_size
                    .map_or_else(|| "-".to_string(), |n| n.to_string());
                println!(
                    "rep {:>3}  seed {:>6}  population front {:>4}  archive {:>6}",
                    rep.index, rep.seed, rep.population_front_size, archive
                );
            }
            println!("wrote {}", config.out_dir.join("report.json").display());
        }
        Command::CompareTiming { config, out } => {
            let config = load(&config, cli.strict_archive_full)?;
            let (plain, fh) = harness::timing_pair(&config);
            let table = harness::compare_timing(&plain, &fh)?;
            print!("{}", table.to_text());
            let dir = out.unwrap_or(config.out_dir);
            std::fs::create_dir_all(&dir).map_err(|e| Error::Io {
                path: dir.clone(),
                source: e,
            })?;
            let path = dir.join("timing.csv");
            std::fs::write(&path, table.to_csv()).map_err(|e| Error::Io {
                path: path.clone(),
                source: e,
            })?;
            println!("wrote {}", path.display());
        }
        Command::ReferenceFront {
            problem,
            grid,
            cache,
        } => {
            let p = problem_by_name(&problem, 0.0)?;
            let cache = ReferenceFrontCache::new(cache);
            let front = cache.load_or_build(&p, grid, DEFAULT_GRID_CAP)?;
            println!(
                "{} points -> {}",
                front.points.len(),
                cache.path_for(&p, grid).display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
