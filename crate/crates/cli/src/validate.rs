//! The standalone invariant suite behind `clusternet validate`.

use clusternet::metrics::{
    ccdf_bounds, clustering_gain, poisson_success, success_bounds, success_probability,
    success_probability_nakagami, tail_constants,
};
use clusternet::montecarlo::simulate_interference;
use clusternet::{ClusterModel, FadingModel, NetworkConfig, PathLoss, QuadratureSpec, SimSpec};

use crate::config::{Experiment, ExperimentConfig};
use crate::output::{csv_bytes, Method, Row};
use crate::{experiments, thread_pool, RunError};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub criterion: u8,
    pub name: &'static str,
    pub observed: f64,
    pub expected: String,
    pub pass: bool,
}

impl Check {
    fn new(
        criterion: u8,
        name: &'static str,
        observed: f64,
        expected: impl Into<String>,
        pass: bool,
    ) -> Self {
        Self {
            criterion,
            name,
            observed,
            expected: expected.into(),
            pass,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} [{}] {:<22} observed {:<12.6e} required {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.criterion,
            self.name,
            self.observed,
            self.expected
        )
    }

    pub fn row(&self) -> Row {
        Row::new(
            &format!("criterion={}", self.criterion),
            self.name,
            Method::Analytic,
            self.observed,
            0.0,
        )
    }
}

fn core(op: &'static str) -> impl Fn(clusternet::Error) -> RunError {
    move |e| RunError::from_core(e, op)
}

/// Thomas, sigma = 0.25, singular path loss with alpha = 4, Rayleigh fading,
/// T = 1, R = 0.5.
pub fn standard_thomas() -> NetworkConfig {
    NetworkConfig::new(
        ClusterModel::thomas(1.0, 5.0, 0.25),
        PathLoss::singular(4.0),
        FadingModel::rayleigh(1.0),
        1.0,
        0.5,
    )
}

/// `lower <= success <= tight_upper <= upper` on a 4 x 4 grid of link
/// distances and mean cluster sizes.
pub fn bound_ordering(spec: &QuadratureSpec) -> Result<Check, RunError> {
    let mut worst = f64::INFINITY;
    for r in [0.25, 0.5, 1.0, 2.0] {
        for c in [0.5, 1.0, 2.0, 5.0] {
            let cfg = standard_thomas()
                .with_link_distance(r)
                .with_intensities(1.0, c);
            let p = success_probability(&cfg, spec)
                .map_err(core("success_probability"))?
                .value;
            let b = success_bounds(&cfg, spec).map_err(core("success_bounds"))?;
            worst = worst
                .min(p - b.lower)
                .min(b.tight_upper - p)
                .min(b.upper - b.tight_upper);
        }
    }
    Ok(Check::new(
        3,
        "bound_ordering_slack",
        worst,
        ">= -1e-8",
        worst >= -1e-8,
    ))
}

/// Interference at `(0.3, 0)` given a transmitter at the origin: Thomas
/// parents at 2 per unit area, 3 daughters on average, sigma = 0.25,
/// singular path loss with alpha = 4, Rayleigh fading.
pub fn ccdf_config() -> NetworkConfig {
    NetworkConfig::new(
        ClusterModel::thomas(2.0, 3.0, 0.25),
        PathLoss::singular(4.0),
        FadingModel::rayleigh(1.0),
        1.0,
        0.3,
    )
}

fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (a.ln() + (b.ln() - a.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Least-squares slope of `ln ys` against `ln xs`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Empirical CCDF against the analytic bounds, the tail slope of the
/// empirical CCDF over the decade where it falls from 1e-2 to 1e-3, and the
/// tail constant of the lower bound.
pub fn ccdf_checks(sim: &SimSpec, spec: &QuadratureSpec) -> Result<Vec<Check>, RunError> {
    let cfg = ccdf_config();
    let d = simulate_interference(&cfg, sim, true).map_err(core("simulate_interference"))?;
    let n = d.len() as f64;
    let top = d.quantile(1.0 - 100.0 / n);

    let mut worst: f64 = 0.0;
    for y in log_grid(d.median(), top, 10) {
        let b = ccdf_bounds(&cfg, y, spec).map_err(core("ccdf_bounds"))?;
        let (emp, se) = (d.ccdf(y), d.ccdf_std_error(y).max(1.0 / n));
        worst = worst.max((b.lower - emp) / se).max((emp - b.upper) / se);
    }

    let ys = log_grid(d.quantile(0.99), d.quantile(0.999), 10);
    let cc: Vec<f64> = ys.iter().map(|&y| d.ccdf(y)).collect();
    let slope = loglog_slope(&ys, &cc);

    let (theta1, _) = tail_constants(&cfg).map_err(core("tail_constants"))?;
    let y = 1e4 * cfg.link_gain();
    let lower = ccdf_bounds(&cfg, y, spec)
        .map_err(core("ccdf_bounds"))?
        .lower;
    let ratio = y.sqrt() * lower / theta1;

    Ok(vec![
        Check::new(
            4,
            "ccdf_sandwich_se",
            worst,
            "<= 3 standard errors outside the bounds",
            worst <= 3.0,
        ),
        Check::new(
            4,
            "ccdf_tail_slope",
            slope,
            "-0.5 +- 0.05",
            (slope + 0.5).abs() <= 0.05,
        ),
        Check::new(
            4,
            "ccdf_tail_constant",
            ratio,
            "1 +- 0.05",
            (ratio - 1.0).abs() <= 0.05,
        ),
    ])
}

/// Poisson limit of success, unit gain for tiny clusters, and Nakagami with
/// m = 1 against Rayleigh.
pub fn degeneracy_checks(spec: &QuadratureSpec) -> Result<Vec<Check>, RunError> {
    let cfg = standard_thomas();
    let lambda = cfg.cluster.intensity();

    let c = 1e-2;
    let p = success_probability(&cfg.with_intensities(lambda / c, c), spec)
        .map_err(core("success_probability"))?
        .value;
    let pp = poisson_success(&cfg.pathloss, cfg.threshold, cfg.link_distance, lambda)
        .map_err(core("poisson_success"))?;
    let ppp_gap = (p / pp - 1.0).abs();

    let c = 1e-3;
    let g = clustering_gain(&cfg.with_intensities(lambda / c, c), spec)
        .map_err(core("clustering_gain"))?
        .gain;

    let rayleigh = success_probability(&cfg, spec)
        .map_err(core("success_probability"))?
        .value;
    let nakagami = success_probability_nakagami(
        &cfg.with_fading(FadingModel::Nakagami { m: 1, omega: 1.0 }),
        spec,
    )
    .map_err(core("success_probability_nakagami"))?;
    let naka_gap = (nakagami / rayleigh - 1.0).abs();

    Ok(vec![
        Check::new(9, "ppp_limit_rel_gap", ppp_gap, "< 1e-2", ppp_gap < 1e-2),
        Check::new(
            9,
            "small_cluster_gain",
            g,
            "1 +- 1e-2",
            (g - 1.0).abs() < 1e-2,
        ),
        Check::new(
            9,
            "nakagami_one_rel_gap",
            naka_gap,
            "< 1e-4",
            naka_gap < 1e-4,
        ),
    ])
}

/// A small simulated success sweep run on 1 and on 8 worker threads.
pub fn determinism_check(seed: u64) -> Result<Check, RunError> {
    let text = "[sweep]\nparameter = \"link_distance\"\nmin = 0.25\nmax = 1.0\npoints = 4\n\n\
                [simulation]\nenabled = true\ntrials = 4000\n";
    let mut cfg: ExperimentConfig = toml::from_str(text).expect("built-in config");
    cfg.seed = seed;
    let cfg = cfg
        .resolve(Experiment::SuccessCurve)
        .map_err(RunError::Config)?;
    let run = |threads: usize| -> Result<Vec<u8>, RunError> {
        let pool = thread_pool(threads)?;
        pool.install(|| experiments::run(&cfg))
            .map(|rows| csv_bytes(&rows))
    };
    let one = run(1)?;
    let eight = run(8)?;
    let same = one == eight;
    Ok(Check::new(
        10,
        "csv_identical_1_vs_8",
        if same { 1.0 } else { 0.0 },
        "1 (byte-identical)",
        same,
    ))
}

/// Every check of the suite, in criterion order.
pub fn run_all(cfg: &ExperimentConfig) -> Result<Vec<Check>, RunError> {
    let spec = cfg.quadrature_spec();
    let mut checks = vec![bound_ordering(&spec)?];
    checks.extend(ccdf_checks(
        &cfg.sim_spec(experiments::derived_seed(cfg.seed, 0)),
        &spec,
    )?);
    checks.extend(degeneracy_checks(&spec)?);
    checks.push(determinism_check(cfg.seed)?);
    Ok(checks)
}
