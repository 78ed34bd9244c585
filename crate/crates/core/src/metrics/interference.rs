//! Interference at the receiver seen from a typical transmitter: tail
//! bounds, their power-law constants and the mean.

use std::f64::consts::PI;

use crate::channel::{FadingModel, PathLoss, PathLossKind};
use crate::error::{Error, Result};
use crate::geometry::{ClusterModel, Scattering};
use crate::network::NetworkConfig;
use crate::pgfl::{conditional_pgfl, Kernel, QuadratureSpec};
use crate::quadrature::{integrate_power_tail, integrate_with_breaks, Tolerance};

/// Bounds on `P(I(z) > y)` under the reduced Palm distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcdfBoundPair {
    pub y: f64,
    pub lower: f64,
    pub upper: f64,
    pub varphi: f64,
    /// The unclipped upper bound exceeded 1.
    pub clipped: bool,
    pub theta1: Option<f64>,
    pub theta2: Option<f64>,
}

/// `E[N(N-1)] / E[N]`, the mean number of siblings of a typical daughter.
fn sibling_mean(model: &ClusterModel) -> f64 {
    if model.mean_cluster_size == 0.0 {
        0.0
    } else {
        model.factorial_moment2() / model.mean_cluster_size
    }
}

fn pathloss_breaks(pl: &PathLoss) -> Vec<f64> {
    match pl.kind {
        PathLossKind::ClippedSingular => vec![1.0],
        _ => vec![],
    }
}

/// `int_0^inf u w(u) ring_{f*f}(u, d) du`: the integral of a function radial
/// about a point at distance `d` from the origin against `f * f`.
fn selfconv_radial_integral<F>(
    s: &Scattering,
    d: f64,
    breaks: &[f64],
    tol: &Tolerance,
    mut w: F,
) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let reach = s.selfconv_reach();
    let lo = (d - reach).max(0.0);
    let hi = d + reach;
    let mut pts: Vec<f64> = breaks.to_vec();
    pts.push(d);
    if let Scattering::MaternBall { radius } = *s {
        pts.push((d - 2.0 * radius).abs());
    }
    let inner = tol.inner();
    let est = integrate_with_breaks(
        |u| Ok(u * w(u) * s.selfconv_ring(u, d, &inner)?),
        lo,
        hi,
        &pts,
        tol,
    )?;
    Ok(est.value)
}

/// `phi(y)`, the Markov correction of the upper bound.
pub fn varphi(cfg: &NetworkConfig, y: f64, spec: &QuadratureSpec) -> Result<f64> {
    cfg.validate()?;
    if !(y > 0.0) {
        return Err(Error::invalid("y", "interference level must be positive"));
    }
    let pl = cfg.pathloss;
    let fading = cfg.fading;
    let lambda = cfg.cluster.intensity();
    let siblings = sibling_mean(&cfg.cluster);
    let tol = spec.tolerance();
    let mut breaks = pathloss_breaks(&pl);
    if let FadingModel::GeneralizedPareto { theta, .. } = fading {
        if theta > 0.0 {
            breaks.push(pl.inverse_radial(y / theta));
        }
    }
    let weight = |u: f64| {
        let g = pl.radial(u);
        if g.is_infinite() {
            0.0
        } else {
            g * fading.truncated_mean(y / g)
        }
    };
    let mut total = 0.0;
    if lambda > 0.0 {
        let scale = (fading.effective_mean() / y).powf(1.0 / pl.alpha);
        let est = integrate_power_tail(
            |u| Ok(2.0 * PI * u * weight(u)),
            0.0,
            2.0 * scale.max(1e-3),
            &breaks,
            &tol,
            pl.alpha - 1.0,
        )
        .map_err(|e| e.in_operation("varphi"))?;
        total += lambda * est.value;
    }
    if siblings > 0.0 {
        let v = selfconv_radial_integral(
            &cfg.cluster.scattering,
            cfg.link_distance,
            &breaks,
            &tol,
            weight,
        )
        .map_err(|e| e.in_operation("varphi"))?;
        total += siblings * v;
    }
    Ok(total / y)
}

/// Kernel `x -> F_h(y / g(x - z))`.
fn outage_kernel(cfg: &NetworkConfig, y: f64) -> Kernel {
    let pl = cfg.pathloss;
    let fading = cfg.fading;
    let mut breaks = pathloss_breaks(&pl);
    if let FadingModel::GeneralizedPareto { theta, .. } = fading {
        if theta > 0.0 {
            breaks.push(pl.inverse_radial(y / theta));
        }
    }
    Kernel::radial(
        format!("ccdf(y={y})"),
        cfg.receiver(),
        move |u| fading.ccdf(y / pl.radial(u)),
        breaks,
        None,
        (fading.effective_mean() / y).powf(1.0 / pl.alpha),
    )
}

pub fn ccdf_bounds(cfg: &NetworkConfig, y: f64, spec: &QuadratureSpec) -> Result<CcdfBoundPair> {
    cfg.validate()?;
    let (theta1, theta2) = match tail_constants(cfg) {
        Ok((a, b)) => (Some(a), Some(b)),
        Err(_) => (None, None),
    };
    if y <= 0.0 {
        return Ok(CcdfBoundPair {
            y,
            lower: 1.0,
            upper: 1.0,
            varphi: 0.0,
            clipped: false,
            theta1,
            theta2,
        });
    }
    let g = conditional_pgfl(&outage_kernel(cfg, y), &cfg.cluster, spec)
        .map_err(|e| e.in_operation("ccdf_bounds"))?;
    let lower = g.deficit;
    let phi = varphi(cfg, y, spec)?;
    let raw = lower + phi * g.value;
    Ok(CcdfBoundPair {
        y,
        lower,
        upper: raw.clamp(lower, 1.0),
        varphi: phi,
        clipped: raw > 1.0,
        theta1,
        theta2,
    })
}

/// Constants of the power-law tails of the two CCDF bounds,
/// `lower ~ theta1 y^(-2/alpha)` and `upper - lower ~ theta2 y^(-2/alpha)`.
pub fn tail_constants(cfg: &NetworkConfig) -> Result<(f64, f64)> {
    cfg.validate()?;
    if cfg.pathloss.kind != PathLossKind::Singular {
        return Err(Error::Unsupported(
            "tail constants require singular path loss".into(),
        ));
    }
    let a = cfg.pathloss.alpha;
    let m = cfg.fading.fractional_moment(2.0 / a)?;
    let density = cfg.cluster.intensity()
        + sibling_mean(&cfg.cluster) * cfg.cluster.scattering.selfconv(cfg.link_distance);
    let theta1 = PI * density * m;
    Ok((theta1, 2.0 * theta1 / (a - 2.0)))
}

/// Asymptotic bounds on the outage probability of a DS-CDMA link with
/// spreading factor `m`, valid as `m` grows.
pub fn ds_cdma_outage_scaling(cfg: &NetworkConfig, m: f64) -> Result<(f64, f64)> {
    if !(m >= 1.0) {
        return Err(Error::invalid("m", "spreading factor must be at least 1"));
    }
    let (theta1, _) = tail_constants(cfg)?;
    let a = cfg.pathloss.alpha;
    let delta = 2.0 / a;
    let r = cfg.link_distance;
    let lower = theta1
        * r
        * r
        * m.powf(-delta)
        * cfg.threshold.powf(delta)
        * cfg.fading.fractional_moment(-delta)?;
    Ok((lower, lower * a / (a - 2.0)))
}

/// Mean interference split into the Poisson part and the excess caused by
/// the siblings of the transmitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanInterference {
    pub poisson: f64,
    pub excess: f64,
    pub total: f64,
}

/// Mean interference at the receiver, under the reduced Palm distribution
/// when `conditioned` and under the stationary one otherwise.
pub fn mean_interference_thomas(
    cfg: &NetworkConfig,
    conditioned: bool,
    spec: &QuadratureSpec,
) -> Result<MeanInterference> {
    cfg.validate()?;
    if cfg.pathloss.kind == PathLossKind::Singular {
        return Err(Error::DivergentMean(
            "singular path loss is not integrable at the origin",
        ));
    }
    let mean = cfg.fading.mean()?;
    let lambda = cfg.cluster.intensity();
    let poisson = if lambda > 0.0 {
        lambda * mean * cfg.pathloss.tail_integral(0.0)?
    } else {
        0.0
    };
    let siblings = sibling_mean(&cfg.cluster);
    let excess = if conditioned && siblings > 0.0 {
        let pl = cfg.pathloss;
        let v = selfconv_radial_integral(
            &cfg.cluster.scattering,
            cfg.link_distance,
            &pathloss_breaks(&pl),
            &spec.tolerance(),
            |u| pl.radial(u),
        )
        .map_err(|e| e.in_operation("mean_interference"))?;
        siblings * mean * v
    } else {
        0.0
    };
    Ok(MeanInterference {
        poisson,
        excess,
        total: poisson + excess,
    })
}
