//! Acceptance criteria 1 to 10, one PASS/FAIL line each. Exits non-zero when
//! any criterion fails.

use std::f64::consts::PI;
use std::fs;
use std::process::Command;
use std::time::Instant;

use clusternet::metrics::{
    beta_integral, clustering_gain, constrained_capacity, lambda_star, poisson_capacity,
    poisson_success, spread_spectrum_compare, success_probability, transmission_capacity,
    unconstrained_capacity_search,
};
use clusternet::montecarlo::simulate_success_probability;
use clusternet::{ClusterModel, FadingModel, NetworkConfig, PathLoss, QuadratureSpec, SimSpec};
use clusternet_cli::validate::{self, Check};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }

    fn from_checks(checks: &[Check]) -> Self {
        let detail = checks
            .iter()
            .map(|c| {
                format!(
                    "{} {} {:.4e}",
                    if c.pass { "ok" } else { "FAILED" },
                    c.name,
                    c.observed
                )
            })
            .collect::<Vec<_>>()
            .join("; ");
        Self::new(checks.iter().all(|c| c.pass), detail)
    }
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

/// First `x` in the grid where `f` changes sign, refined by bisection.
fn crossing(f: impl Fn(f64) -> f64, grid: &[f64]) -> Option<f64> {
    let pair = grid
        .windows(2)
        .find(|w| f(w[0]).signum() != f(w[1]).signum())?;
    let (mut a, mut b) = (pair[0], pair[1]);
    let fa = f(a);
    for _ in 0..40 {
        let m = 0.5 * (a + b);
        if f(m).signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

fn poisson_closed_form() -> Outcome {
    let start = Instant::now();
    let pl = PathLoss::singular(4.0);
    let beta_i = beta_integral(&pl, 1.0, 1.0, &spec()).unwrap();
    let err_beta = rel(beta_i, PI * PI / 2.0);
    let err_p = [0.5, 1.0, 2.0]
        .iter()
        .map(|&l| {
            rel(
                poisson_success(&pl, 1.0, 1.0, l).unwrap(),
                (-l * beta_i).exp(),
            )
        })
        .fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        err_beta < 1e-4 && err_p < 1e-6 && secs < 5.0,
        format!("beta_I rel err {err_beta:.2e}, success rel err {err_p:.2e}, {secs:.2}s"),
    )
}

fn success_vs_simulation() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut seed = 100;
    for model in [
        ClusterModel::thomas(0.2, 2.0, 0.25),
        ClusterModel::matern(0.2, 2.0, 0.25),
    ] {
        for pl in [PathLoss::singular(4.0), PathLoss::bounded(4.0)] {
            for r in [0.5, 1.0] {
                let cfg = NetworkConfig::new(model, pl, FadingModel::rayleigh(1.0), 1.0, r);
                let analytic = success_probability(&cfg, &spec()).unwrap().value;
                seed += 1;
                let mc = simulate_success_probability(&cfg, &SimSpec::new(100_000, seed)).unwrap();
                worst = worst.max((mc.value - analytic).abs() / mc.std_error);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        worst <= 3.0 && secs < 600.0,
        format!("8 configs, worst |analytic - simulated| = {worst:.2} s.e., {secs:.0}s"),
    )
}

fn fig5_config(intensity: f64) -> NetworkConfig {
    let c = 3.0;
    NetworkConfig::new(
        ClusterModel::thomas(intensity / c, c, 0.25),
        PathLoss::bounded(4.0),
        FadingModel::rayleigh(1.0),
        0.5,
        0.0,
    )
}

fn lambda_star_anchor() -> Outcome {
    let ls = lambda_star(&fig5_config(1.0), &spec()).unwrap();
    Outcome::new(
        (ls - 1.26).abs() <= 0.05,
        format!("lambda*(0, 0.5) = {ls:.4}, required 1.26 +- 0.05"),
    )
}

fn figure_anchors() -> Outcome {
    let gain = |lambda: f64, r: f64| {
        clustering_gain(&fig5_config(lambda).with_link_distance(r), &spec())
            .unwrap()
            .gain
    };
    let g0 = gain(0.75, 0.0);
    let cross = crossing(|r| gain(0.75, r) - 1.0, &linspace(0.0, 3.0, 31));
    let g9 = gain(9.0, 0.0);

    let matern = NetworkConfig::new(
        ClusterModel::matern(1.0, 2.0, 0.6),
        PathLoss::singular(4.0),
        FadingModel::rayleigh(1.0),
        0.1,
        0.1,
    );
    let fig3 = crossing(
        |r| {
            let cfg = matern.with_link_distance(r);
            success_probability(&cfg, &spec()).unwrap().value
                - poisson_success(&cfg.pathloss, cfg.threshold, r, 2.0).unwrap()
        },
        &linspace(0.1, 2.0, 20),
    );

    let start_ok = (g0 - 0.25).abs() <= 0.1;
    let cross_ok = cross.is_some_and(|r| (r - 1.2).abs() <= 0.2);
    let g9_ok = g9 > 1.0;
    let fig3_ok = fig3.is_some_and(|r| (r - 0.8).abs() <= 0.15);
    let show = |x: Option<f64>| x.map_or("none".to_string(), |r| format!("{r:.3}"));
    Outcome::new(
        start_ok && cross_ok && g9_ok && fig3_ok,
        format!(
            "G(0) = {g0:.3} [{}], G = 1 at R = {} [{}], G9(0) = {g9:.2} [{}], success crosses PPP(2) at R = {} [{}]",
            ok(start_ok),
            show(cross),
            ok(cross_ok),
            ok(g9_ok),
            show(fig3),
            ok(fig3_ok)
        ),
    )
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn capacity_config(alpha: f64) -> NetworkConfig {
    NetworkConfig::new(
        ClusterModel::thomas(1.0, 1.0, 0.25),
        PathLoss::singular(alpha),
        FadingModel::rayleigh(1.0),
        1.0,
        1.0,
    )
}

fn capacity() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for eps in [1e-3, 1e-2] {
        let cfg = capacity_config(4.0);
        let r = transmission_capacity(&cfg, eps, &spec()).unwrap();
        let s = unconstrained_capacity_search(&cfg, eps, &spec()).unwrap();
        let target = poisson_capacity(eps, r.summary.beta_i) / (1.0 - eps);
        let ratio = s.intensity / target;
        let good = r.valid && (0.99..=1.01).contains(&ratio);
        pass &= good;
        notes.push(format!(
            "sup/target at eps={eps} is {ratio:.5} [{}]",
            ok(good)
        ));
    }
    let mut inside = true;
    for alpha in [3.0, 3.5, 4.0, 4.5, 5.0] {
        let c = constrained_capacity(&capacity_config(alpha), 0.1, &spec()).unwrap();
        inside &= c.lower <= c.exact && c.exact <= c.upper;
    }
    pass &= inside;
    notes.push(format!(
        "exact within bounds for alpha 3..5 [{}]",
        ok(inside)
    ));
    let c = constrained_capacity(&capacity_config(4.0), 1e-3, &spec()).unwrap();
    let gap = rel(c.first_order, c.exact);
    pass &= gap <= 0.02;
    notes.push(format!(
        "first-order vs exact at eps=1e-3 off by {gap:.2e} [{}]",
        ok(gap <= 0.02)
    ));
    Outcome::new(pass, notes.join("; "))
}

fn spread_spectrum() -> Outcome {
    let cfg = capacity_config(4.0);
    let ratios: Vec<f64> = [4, 16, 64]
        .iter()
        .map(|&m| {
            spread_spectrum_compare(&cfg, 0.01, m, &spec())
                .unwrap()
                .log_ratio
                .unwrap()
        })
        .collect();
    Outcome::new(
        ratios.iter().all(|r| (0.4..=0.6).contains(r)),
        format!(
            "ln(C_FH/C_DS)/ln M for M = 4, 16, 64: {:.4}, {:.4}, {:.4}",
            ratios[0], ratios[1], ratios[2]
        ),
    )
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("clusternet-acceptance-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("ccdf.toml");
    fs::write(
        &cfg,
        "seed = 3\n\n[network]\nparent_intensity = 2.0\nmean_cluster_size = 3.0\nlink_distance = 0.3\n\n\
         [simulation]\ntrials = 20000\n",
    )
    .unwrap();
    let run = |threads: &str| {
        let out = dir.join(format!("threads-{threads}"));
        let status = Command::new(env!("CARGO_BIN_EXE_clusternet"))
            .args([
                "ccdf",
                "--config",
                cfg.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ])
            .env("CLUSTERNET_THREADS", threads)
            .output()
            .unwrap()
            .status;
        assert!(status.success());
        fs::read(out.join("ccdf.csv")).unwrap()
    };
    let (one, eight) = (run("1"), run("8"));
    Outcome::new(
        one == eight,
        format!(
            "ccdf CSV with 1 and 8 workers: {} vs {} bytes, identical = {}",
            one.len(),
            eight.len(),
            one == eight
        ),
    )
}

type Criterion = (u8, &'static str, Box<dyn Fn() -> Outcome>);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "Poisson closed form", Box::new(poisson_closed_form)),
        (
            2,
            "analytic vs simulated success",
            Box::new(success_vs_simulation),
        ),
        (
            3,
            "bound ordering",
            Box::new(|| Outcome::from_checks(&[validate::bound_ordering(&spec()).unwrap()])),
        ),
        (
            4,
            "CCDF sandwich and tail",
            Box::new(|| {
                Outcome::from_checks(
                    &validate::ccdf_checks(&SimSpec::new(400_000, 4), &spec()).unwrap(),
                )
            }),
        ),
        (5, "lambda* anchor", Box::new(lambda_star_anchor)),
        (
            6,
            "gain and success-curve anchors",
            Box::new(figure_anchors),
        ),
        (7, "transmission capacity", Box::new(capacity)),
        (8, "spread spectrum", Box::new(spread_spectrum)),
        (
            9,
            "degeneracy and limits",
            Box::new(|| Outcome::from_checks(&validate::degeneracy_checks(&spec()).unwrap())),
        ),
        (10, "determinism across workers", Box::new(determinism)),
    ];
    let mut failed = Vec::new();
    for (n, name, check) in criteria {
        let o = check();
        println!(
            "criterion {n:>2} {} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 10 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
