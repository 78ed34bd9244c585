//! Clustering gain: success under clustering relative to a Poisson network
//! of the same intensity.

use crate::error::{Error, Result};
use crate::geometry::CountLaw;
use crate::network::NetworkConfig;
use crate::pgfl::{integrate_over_plane, QuadratureSpec};

use super::success::{poisson_success, success_kernel, success_probability};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringGain {
    pub gain: f64,
    pub p1: f64,
    pub p2: f64,
    /// `P_p(lambda)` at the same total intensity.
    pub poisson: f64,
}

/// `e^-x - 1 + x`, accurate for small `x`.
fn excess_exp(x: f64) -> f64 {
    if x < 1e-3 {
        x * x * (0.5 - x / 6.0 + x * x / 24.0)
    } else {
        (-x).exp_m1() + x
    }
}

/// `G(R) = P(success) / P_p(lambda_p c)`.
///
/// With Poisson cluster sizes the ratio is evaluated as
/// `P2 exp(lambda_p int (e^{-c beta} - 1 + c beta) dy)`, which stays accurate
/// as `c -> 0`.
pub fn clustering_gain(cfg: &NetworkConfig, spec: &QuadratureSpec) -> Result<ClusteringGain> {
    if cfg.noise != 0.0 {
        return Err(Error::Unsupported(
            "clustering gain assumes no noise".into(),
        ));
    }
    let p = success_probability(cfg, spec)?;
    let lambda = cfg.cluster.intensity();
    let poisson = poisson_success(&cfg.pathloss, cfg.threshold, cfg.link_distance, lambda)?;
    let gain = match cfg.cluster.count_law {
        CountLaw::PoissonCount if lambda > 0.0 => {
            let c = cfg.cluster.mean_cluster_size;
            let est = integrate_over_plane(
                &success_kernel(cfg),
                &cfg.cluster.scattering,
                spec,
                |_, w| excess_exp(c * w),
            )
            .map_err(|e| e.in_operation("clustering_gain"))?;
            p.p2 * (cfg.cluster.parent_intensity * est.value).exp()
        }
        _ => p.value / poisson,
    };
    Ok(ClusteringGain {
        gain,
        p1: p.p1,
        p2: p.p2,
        poisson,
    })
}

/// Intensity below which the gain decreases with the mean cluster size,
/// `2 int beta f / int beta^2`.
pub fn lambda_star(cfg: &NetworkConfig, spec: &QuadratureSpec) -> Result<f64> {
    cfg.validate()?;
    let kernel = success_kernel(cfg);
    let s = cfg.cluster.scattering;
    let kappa = crate::pgfl::integrate_over_parent(&kernel, &s, spec, |w| w)
        .map_err(|e| e.in_operation("lambda_star"))?
        .value;
    let squares = integrate_over_plane(&kernel, &s, spec, |_, w| w * w)
        .map_err(|e| e.in_operation("lambda_star"))?
        .value;
    Ok(2.0 * kappa / squares)
}

/// One point of [`gain_monotonicity_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSlope {
    pub mean_cluster_size: f64,
    pub gain: f64,
    /// `dG/dc` at fixed total intensity.
    pub slope: f64,
}

/// Observed slopes of the gain against the sign predicted by `lambda*`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityLedger {
    pub lambda: f64,
    pub lambda_star: f64,
    /// `lambda <= lambda*`.
    pub predicted_decreasing: bool,
    pub observed_decreasing: bool,
    pub slopes: Vec<GainSlope>,
}

impl MonotonicityLedger {
    pub fn consistent(&self) -> bool {
        self.predicted_decreasing == self.observed_decreasing
    }
}

/// Central differences of the gain in the mean cluster size, holding the
/// total intensity of `cfg` fixed, on the grid `sizes`.
pub fn gain_monotonicity_check(
    cfg: &NetworkConfig,
    sizes: &[f64],
    spec: &QuadratureSpec,
) -> Result<MonotonicityLedger> {
    let lambda = cfg.cluster.intensity();
    if !(lambda > 0.0) {
        return Err(Error::invalid(
            "intensity",
            "the gain check needs a positive intensity",
        ));
    }
    if sizes.is_empty() || sizes.iter().any(|c| !(*c > 0.0)) {
        return Err(Error::invalid(
            "sizes",
            "mean cluster sizes must be positive",
        ));
    }
    let ls = lambda_star(cfg, spec)?;
    let tight = spec.tightened(100.0);
    let at = |c: f64| clustering_gain(&cfg.with_intensities(lambda / c, c), &tight).map(|g| g.gain);
    let mut slopes = Vec::with_capacity(sizes.len());
    for &c in sizes {
        let h = 1e-2 * c;
        let slope = (at(c + h)? - at(c - h)?) / (2.0 * h);
        slopes.push(GainSlope {
            mean_cluster_size: c,
            gain: at(c)?,
            slope,
        });
    }
    Ok(MonotonicityLedger {
        lambda,
        lambda_star: ls,
        predicted_decreasing: lambda <= ls,
        observed_decreasing: slopes.iter().all(|s| s.slope <= 0.0),
        slopes,
    })
}
