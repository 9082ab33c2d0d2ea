//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for bad arguments or an invalid config, 1 for
//! runtime failures. A config that fails at run time is reported with its id
//! and the remaining configs still run.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use abroca_core::engine::{Replications, LARGE_N_THRESHOLD};
use abroca_core::{AbrocaMethod, ExperimentGrid};
use clap::{Args, Parser, Subcommand};

use crate::config::{parse_config, ConfigDocument, GridDocument, DEFAULT_SEED};
use crate::error::{Result, SimError};
use crate::report::{summarize_config, write_summaries, ReplicationRow, ReplicationSink};
use crate::runner::{Runner, Workers};

pub const REPLICATIONS_FILE: &str = "replications.csv";
pub const SUMMARIES_FILE: &str = "summaries.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Parser)]
#[command(
    name = "abroca-sim",
    version,
    about = "Monte Carlo sampling distribution of ABROCA"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equal group AUCs (0.8/0.8) across 38 sample sizes.
    Rq1(RunArgs),
    /// Minority AUC in {0.79, 0.75, 0.7, 0.6, 0.5} across 38 sample sizes.
    Rq2(RunArgs),
    /// Group and class imbalance at a fixed sample size.
    Rq3 {
        #[command(flatten)]
        run: RunArgs,
        /// Total sample size; 3000 and 5000 are the usual choices.
        #[arg(long, default_value_t = 3000)]
        n_total: usize,
    },
    /// One config from a JSON file.
    Single {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        config: PathBuf,
    },
    /// Every config of a JSON grid document or manifest.
    Grid {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        config: PathBuf,
    },
    /// Check a config document without running or writing anything.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Master seed; overrides any seed in the config file (default 42).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Replications per config (default 1000, or the config file's value).
    #[arg(long)]
    pub reps: Option<usize>,
    /// Replications for configs with more than 20,000 records.
    #[arg(long)]
    pub large_n_reps: Option<usize>,
    /// Worker threads, or `auto`.
    #[arg(long, env = "ABROCA_WORKERS", default_value = "auto")]
    pub workers: Workers,
    /// Output directory, created if absent.
    #[arg(long)]
    pub out: PathBuf,
    /// Overwrite the outputs of an earlier run.
    #[arg(long)]
    pub force: bool,
    /// `exact`, or `grid:N` to integrate on N evenly spaced FPR points.
    #[arg(long)]
    pub grid_mode: Option<AbrocaMethod>,
}

impl RunArgs {
    fn replications(&self) -> Replications {
        Replications {
            default: self.reps.unwrap_or(Replications::default().default),
            large_n: self.large_n_reps,
        }
    }

    /// Command-line values win over whatever the document says.
    fn apply(&self, grid: &mut ExperimentGrid) {
        for c in &mut grid.configs {
            if let Some(seed) = self.seed {
                c.master_seed = seed;
            }
            if let Some(reps) = self.reps {
                c.replications = reps;
            }
            if let Some(reps) = self.large_n_reps {
                if c.spec.n_total > LARGE_N_THRESHOLD {
                    c.replications = reps;
                }
            }
            if let Some(method) = self.grid_mode {
                c.method = method;
            }
        }
    }
}

fn load(path: &Path) -> Result<ConfigDocument> {
    let text = fs::read_to_string(path)
        .map_err(|e| SimError::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| match e {
        SimError::Config(msg) => SimError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn bad_args(msg: String) -> SimError {
    SimError::Config(msg)
}

/// Turns the invocation into a grid and its run options.
fn plan(command: Command) -> Result<Option<(ExperimentGrid, RunArgs)>> {
    if let Command::Rq1(run)
    | Command::Rq2(run)
    | Command::Rq3 { run, .. }
    | Command::Single { run, .. }
    | Command::Grid { run, .. } = &command
    {
        if run.reps == Some(0) || run.large_n_reps == Some(0) {
            return Err(bad_args("replication counts must be at least 1".into()));
        }
    }
    let (mut grid, run) = match command {
        Command::Rq1(run) => (
            ExperimentGrid::rq1(run.seed.unwrap_or(DEFAULT_SEED), run.replications()),
            run,
        ),
        Command::Rq2(run) => (
            ExperimentGrid::rq2(run.seed.unwrap_or(DEFAULT_SEED), run.replications()),
            run,
        ),
        Command::Rq3 { run, n_total } => {
            let spec_check = abroca_core::PopulationSpec::balanced(n_total, 0.8);
            spec_check.validate().map_err(|e| bad_args(e.to_string()))?;
            (
                ExperimentGrid::rq3(
                    run.seed.unwrap_or(DEFAULT_SEED),
                    n_total,
                    run.replications(),
                ),
                run,
            )
        }
        Command::Single { run, config } => match load(&config)? {
            doc @ ConfigDocument::Single(_) => (doc.into_grid(), run),
            ConfigDocument::Grid(_) => {
                return Err(bad_args(format!(
                    "{} holds a grid; use the `grid` subcommand",
                    config.display()
                )))
            }
        },
        Command::Grid { run, config } => (load(&config)?.into_grid(), run),
        Command::Validate { config } => {
            let doc = load(&config)?;
            println!(
                "{}: {} valid config(s)",
                config.display(),
                doc.configs().len()
            );
            return Ok(None);
        }
    };
    run.apply(&mut grid);
    Ok(Some((grid, run)))
}

/// Runs every config of `grid` into `out`. Returns the number of configs that failed.
pub fn execute(grid: &ExperimentGrid, run: &RunArgs) -> Result<usize> {
    fs::create_dir_all(&run.out).map_err(|e| SimError::io(&run.out, e))?;
    let manifest = run.out.join(MANIFEST_FILE);
    if manifest.exists() && !run.force {
        return Err(SimError::ManifestExists(manifest));
    }
    fs::write(&manifest, GridDocument::manifest(grid).to_json())
        .map_err(|e| SimError::io(&manifest, e))?;

    let runner = Runner::new(run.workers)?;
    eprintln!(
        "{}: {} config(s), {} worker(s) -> {}",
        grid.name,
        grid.len(),
        runner.workers(),
        run.out.display()
    );

    // configs come sorted by id and results by index, so rows stream out in order
    let mut sink = ReplicationSink::replications(run.out.join(REPLICATIONS_FILE))?;
    let mut summaries = Vec::with_capacity(grid.len());
    let mut failed = 0;
    let total = grid.len();
    for (k, config) in grid.configs.iter().enumerate() {
        let started = Instant::now();
        let outcome = runner
            .run_config(config)
            .and_then(|results| Ok((summarize_config(config, &results)?, results)));
        match outcome {
            Ok((summary, results)) => {
                for r in &results {
                    sink.write(&ReplicationRow::new(config, r))?;
                }
                eprintln!(
                    "[{}/{total}] {}: {} reps, median {:.4}, skew {:+.4} ({:.1}s)",
                    k + 1,
                    config.config_id,
                    results.len(),
                    summary.abroca.median,
                    summary.abroca.skew_mm,
                    started.elapsed().as_secs_f64()
                );
                summaries.push(summary);
            }
            Err(e) => {
                failed += 1;
                match &e {
                    SimError::Core(abroca_core::Error::PathologicalConfig { .. }) => {
                        eprintln!("error: {e}")
                    }
                    _ => eprintln!("error: config `{}`: {e}", config.config_id),
                }
            }
        }
    }
    let rows = sink.finish()?;
    let summary_rows = write_summaries(&summaries, run.out.join(SUMMARIES_FILE))?;
    eprintln!("wrote {rows} replication row(s), {summary_rows} summary row(s)");
    Ok(failed)
}

/// 2 for argument and config problems, 1 for everything else.
pub fn exit_code(e: &SimError) -> i32 {
    match e {
        SimError::Config(_) | SimError::ManifestExists(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = plan(cli.command).and_then(|planned| match planned {
        None => Ok(0),
        Some((grid, run)) => execute(&grid, &run),
    });
    match outcome {
        Ok(0) => 0,
        Ok(failed) => {
            eprintln!("error: {failed} config(s) failed");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
