use rayon::prelude::*;

use clusternet::metrics::{
    ccdf_bounds, clustering_gain, poisson_success, spread_spectrum_compare, success_bounds,
    success_probability, success_probability_fixed, success_probability_nakagami,
    transmission_capacity, unconstrained_capacity_search,
};
use clusternet::montecarlo::{simulate_interference, simulate_success_probability};
use clusternet::{CountLaw, EmpiricalDistribution, FadingModel, NetworkConfig};

use crate::config::{Experiment, ExperimentConfig, Point};
use crate::output::{Method, Row};
use crate::RunError;

/// Seed of the `index`-th independent simulation of a run.
pub fn derived_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Computes every row of a resolved sweep experiment, in output order.
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<Row>, RunError> {
    let experiment = cfg.experiment.expect("resolved config");
    let points = cfg.points();
    let simulations = match experiment {
        Experiment::Ccdf if cfg.simulate() => ccdf_simulations(cfg, &points)?,
        _ => Vec::new(),
    };
    let per_point: Vec<Result<Vec<Row>, RunError>> = points
        .par_iter()
        .enumerate()
        .map(|(i, point)| {
            let net = cfg.at(point);
            match experiment {
                Experiment::Ccdf => ccdf(
                    cfg,
                    point,
                    &net,
                    simulations
                        .iter()
                        .find(|s| s.0 == point.series)
                        .map(|s| &s.1),
                ),
                Experiment::SuccessCurve => success(cfg, point, &net, i),
                Experiment::GainCurve => gain(cfg, point, &net),
                Experiment::CapacitySweep => capacity(cfg, point, &net),
                Experiment::SpreadSpectrum => spread(cfg, point, &net),
                Experiment::Validate => unreachable!("validate is not a sweep"),
            }
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_point {
        rows.extend(r?);
    }
    Ok(rows)
}

type Simulation = (Option<(crate::config::Param, f64)>, EmpiricalDistribution);

fn ccdf_simulations(cfg: &ExperimentConfig, points: &[Point]) -> Result<Vec<Simulation>, RunError> {
    let mut series: Vec<Option<(crate::config::Param, f64)>> = Vec::new();
    for p in points {
        if !series.contains(&p.series) {
            series.push(p.series);
        }
    }
    series
        .into_iter()
        .enumerate()
        .map(|(j, s)| {
            let net = cfg.at(&Point::new(s, points[0].sweep));
            let sim = simulate_interference(
                &net,
                &cfg.sim_spec(derived_seed(cfg.seed, j)),
                cfg.ccdf.conditioned,
            )
            .map_err(|e| RunError::from_core(e, "simulate_interference"))?;
            Ok((s, sim))
        })
        .collect()
}

fn nominal(cfg: &ExperimentConfig, v: f64) -> f64 {
    cfg.quadrature.rel_tol * v.abs()
}

fn ccdf(
    cfg: &ExperimentConfig,
    point: &Point,
    net: &NetworkConfig,
    sim: Option<&EmpiricalDistribution>,
) -> Result<Vec<Row>, RunError> {
    let label = point.label();
    let y = cfg.settings(point).y;
    let spec = cfg.quadrature_spec();
    let b = ccdf_bounds(net, y, &spec).map_err(|e| RunError::from_core(e, "ccdf_bounds"))?;
    let mut rows = vec![
        Row::new(
            &label,
            "ccdf",
            Method::BoundLower,
            b.lower,
            nominal(cfg, b.lower),
        ),
        Row::new(
            &label,
            "ccdf",
            Method::BoundUpper,
            b.upper,
            nominal(cfg, b.upper),
        ),
    ];
    if let Some(d) = sim {
        rows.push(Row::new(
            &label,
            "ccdf",
            Method::Montecarlo,
            d.ccdf(y),
            d.ccdf_std_error(y),
        ));
    }
    Ok(rows)
}

fn success(
    cfg: &ExperimentConfig,
    point: &Point,
    net: &NetworkConfig,
    index: usize,
) -> Result<Vec<Row>, RunError> {
    let label = point.label();
    let spec = cfg.quadrature_spec();
    let core = |e| RunError::from_core(e, "success_probability");
    let mut rows = Vec::new();
    let fixed = matches!(net.cluster.count_law, CountLaw::FixedCount(_));
    match net.fading {
        FadingModel::Rayleigh { .. } if fixed => {
            let p = success_probability_fixed(net, &spec).map_err(core)?;
            rows.push(Row::new(
                &label,
                "success",
                Method::Analytic,
                p.value,
                p.error,
            ));
        }
        FadingModel::Rayleigh { .. } => {
            let p = success_probability(net, &spec).map_err(core)?;
            rows.push(Row::new(
                &label,
                "success",
                Method::Analytic,
                p.value,
                p.error,
            ));
            if net.noise == 0.0 {
                let b = success_bounds(net, &spec).map_err(core)?;
                rows.push(Row::new(
                    &label,
                    "success",
                    Method::BoundLower,
                    b.lower,
                    nominal(cfg, b.lower),
                ));
                rows.push(Row::new(
                    &label,
                    "success",
                    Method::BoundUpper,
                    b.upper,
                    nominal(cfg, b.upper),
                ));
                rows.push(Row::new(
                    &label,
                    "success_tight",
                    Method::BoundUpper,
                    b.tight_upper,
                    nominal(cfg, b.tight_upper),
                ));
            }
        }
        FadingModel::Nakagami { .. } => {
            let p = success_probability_nakagami(net, &spec).map_err(core)?;
            rows.push(Row::new(
                &label,
                "success",
                Method::Analytic,
                p,
                10.0 * nominal(cfg, p),
            ));
        }
        FadingModel::GeneralizedPareto { .. } => {
            unreachable!("rejected when the config is resolved")
        }
    }
    if matches!(net.fading, FadingModel::Rayleigh { .. }) && net.noise == 0.0 {
        let pp = poisson_success(
            &net.pathloss,
            net.threshold,
            net.link_distance,
            net.cluster.intensity(),
        )
        .map_err(core)?;
        rows.push(Row::new(
            &label,
            "ppp_success",
            Method::Analytic,
            pp,
            nominal(cfg, pp),
        ));
    }
    if cfg.simulate() {
        let mc = simulate_success_probability(net, &cfg.sim_spec(derived_seed(cfg.seed, index)))
            .map_err(|e| RunError::from_core(e, "simulate_success_probability"))?;
        rows.push(Row::new(
            &label,
            "success",
            Method::Montecarlo,
            mc.value,
            mc.std_error,
        ));
    }
    Ok(rows)
}

fn gain(cfg: &ExperimentConfig, point: &Point, net: &NetworkConfig) -> Result<Vec<Row>, RunError> {
    let g = clustering_gain(net, &cfg.quadrature_spec())
        .map_err(|e| RunError::from_core(e, "clustering_gain"))?;
    Ok(vec![Row::new(
        &point.label(),
        "gain",
        Method::Analytic,
        g.gain,
        nominal(cfg, g.gain),
    )])
}

fn capacity(
    cfg: &ExperimentConfig,
    point: &Point,
    net: &NetworkConfig,
) -> Result<Vec<Row>, RunError> {
    let label = point.label();
    let eps = cfg.settings(point).epsilon;
    let spec = cfg.quadrature_spec();
    let r = transmission_capacity(net, eps, &spec)
        .map_err(|e| RunError::from_core(e, "transmission_capacity"))?;
    let c = &r.constrained;
    let mut rows = vec![
        Row::new(
            &label,
            "poisson_capacity",
            Method::Analytic,
            r.poisson,
            nominal(cfg, r.poisson),
        ),
        Row::new(
            &label,
            "validity_threshold",
            Method::Analytic,
            -(-r.rho).exp_m1(),
            nominal(cfg, r.rho),
        ),
        Row::new(
            &label,
            "capacity",
            Method::BoundLower,
            c.lower,
            nominal(cfg, c.lower),
        ),
        Row::new(
            &label,
            "capacity",
            Method::BoundUpper,
            c.upper,
            nominal(cfg, c.upper),
        ),
        Row::new(
            &label,
            "capacity",
            Method::Analytic,
            c.exact,
            nominal(cfg, c.exact),
        ),
        Row::new(
            &label,
            "capacity_first_order",
            Method::Analytic,
            c.first_order,
            nominal(cfg, c.first_order),
        ),
    ];
    if cfg.capacity.unconstrained {
        let s = unconstrained_capacity_search(net, eps, &spec)
            .map_err(|e| RunError::from_core(e, "unconstrained_capacity_search"))?;
        rows.push(Row::new(
            &label,
            "capacity_unconstrained",
            Method::Analytic,
            s.capacity,
            nominal(cfg, s.capacity),
        ));
    }
    Ok(rows)
}

fn spread(
    cfg: &ExperimentConfig,
    point: &Point,
    net: &NetworkConfig,
) -> Result<Vec<Row>, RunError> {
    let label = point.label();
    let s = cfg.settings(point);
    let r = spread_spectrum_compare(net, s.epsilon, s.spreading as u32, &cfg.quadrature_spec())
        .map_err(|e| RunError::from_core(e, "spread_spectrum_compare"))?;
    let mut rows = vec![
        Row::new(
            &label,
            "capacity_fh",
            Method::Analytic,
            r.frequency_hopping,
            nominal(cfg, r.frequency_hopping),
        ),
        Row::new(
            &label,
            "capacity_ds",
            Method::Analytic,
            r.direct_sequence,
            nominal(cfg, r.direct_sequence),
        ),
    ];
    if let Some(l) = r.log_ratio {
        rows.push(Row::new(
            &label,
            "log_ratio",
            Method::Analytic,
            l,
            nominal(cfg, 1.0) / s.spreading.ln(),
        ));
    }
    Ok(rows)
}
