//! Batch driver: reads an experiment file, evaluates the analytic metrics
//! (and optionally the simulator) over a sweep, and writes a CSV table with a
//! JSON sidecar.

pub mod config;
pub mod experiments;
pub mod output;
pub mod validate;

use std::path::PathBuf;
use std::time::Instant;

use config::{Experiment, ExperimentConfig};

/// Exit status for an unreadable or inconsistent configuration.
pub const EXIT_CONFIG: u8 = 2;
/// Exit status for a numerical routine that failed to converge.
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum RunError {
    Config(String),
    Numerical(String),
    Io(String),
    /// `validate` ran and at least one check failed.
    ChecksFailed(usize),
}

impl RunError {
    /// Sorts a library error into a configuration or a numerical failure.
    pub fn from_core(e: clusternet::Error, op: &'static str) -> Self {
        use clusternet::Error as E;
        match e {
            E::NonConvergence { .. }
            | E::NonFiniteIntegrand { .. }
            | E::DerivativeInstability { .. } => RunError::Numerical(format!("{op}: {e}")),
            other => RunError::Config(format!("{op}: {other}")),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Numerical(_) => EXIT_NUMERICAL,
            RunError::Io(_) | RunError::ChecksFailed(_) => 1,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "configuration error: {m}"),
            RunError::Numerical(m) => write!(f, "numerical failure: {m}"),
            RunError::Io(m) => write!(f, "i/o error: {m}"),
            RunError::ChecksFailed(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

impl std::error::Error for RunError {}

/// Worker count from `CLUSTERNET_THREADS`, else the number of CPUs.
pub fn worker_count() -> Result<usize, RunError> {
    match std::env::var("CLUSTERNET_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(RunError::Config(format!(
                "CLUSTERNET_THREADS: expected a positive integer, got `{v}`"
            ))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

pub fn thread_pool(threads: usize) -> Result<rayon::ThreadPool, RunError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| RunError::Io(e.to_string()))
}

/// Command-line options shared by every experiment.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    /// Print the resolved configuration and stop.
    pub check: bool,
}

/// Loads and resolves the configuration, applying command-line overrides.
pub fn resolve(experiment: Experiment, opts: &Options) -> Result<ExperimentConfig, RunError> {
    let mut cfg = match &opts.config {
        Some(p) => config::load(p).map_err(RunError::Config)?,
        None if experiment == Experiment::Validate => ExperimentConfig::default(),
        None => {
            return Err(RunError::Config(format!(
                "--config is required for the {experiment} experiment"
            )))
        }
    };
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    if let Some(o) = &opts.out {
        cfg.out = Some(o.clone());
    }
    if cfg.out.is_none() {
        cfg.out = Some(PathBuf::from("."));
    }
    cfg.resolve(experiment).map_err(RunError::Config)
}

/// Runs one experiment end to end, printing progress to stdout.
pub fn run(experiment: Experiment, opts: &Options) -> Result<(), RunError> {
    let cfg = resolve(experiment, opts)?;
    if opts.check {
        print!(
            "{}",
            toml::to_string_pretty(&cfg).map_err(|e| RunError::Io(e.to_string()))?
        );
        return Ok(());
    }
    let pool = thread_pool(worker_count()?)?;
    let start = Instant::now();
    let dir = cfg.out.clone().expect("resolved");
    if experiment == Experiment::Validate {
        let checks = pool.install(|| validate::run_all(&cfg))?;
        for c in &checks {
            println!("{}", c.line());
        }
        let rows: Vec<_> = checks.iter().map(|c| c.row()).collect();
        output::write(&dir, &cfg, &rows, start.elapsed().as_secs_f64())
            .map_err(|e| RunError::Io(e.to_string()))?;
        let failed = checks.iter().filter(|c| !c.pass).count();
        println!(
            "{} of {} checks passed",
            checks.len() - failed,
            checks.len()
        );
        return if failed == 0 {
            Ok(())
        } else {
            Err(RunError::ChecksFailed(failed))
        };
    }
    let rows = pool.install(|| experiments::run(&cfg))?;
    let path = output::write(&dir, &cfg, &rows, start.elapsed().as_secs_f64())
        .map_err(|e| RunError::Io(e.to_string()))?;
    println!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}
