//! Transmission capacity: the largest density of successful transmissions
//! for a target outage probability.

use crate::error::{Error, Result};
use crate::network::NetworkConfig;
use crate::pgfl::{integrate_over_plane, representative_deficit, QuadratureSpec};

use super::success::{beta_summary, success_kernel, success_probability, BetaSummary};

/// Capacity of the Poisson network, `(1 - eps) ln(1 / (1 - eps)) / beta_I`.
pub fn poisson_capacity(epsilon: f64, beta_i: f64) -> f64 {
    (1.0 - epsilon) * -(-epsilon).ln_1p() / beta_i
}

/// Capacity with the parent intensity held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstrainedCapacity {
    pub lower: f64,
    /// `+inf` when the bound degenerates.
    pub upper: f64,
    pub first_order: f64,
    /// `(1 - eps) lambda_p c*` with `c*` solving `1 - P(success) = eps`.
    pub exact: f64,
    pub mean_cluster_size: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult {
    pub epsilon: f64,
    pub poisson: f64,
    /// `kappa / beta_hat`.
    pub rho: f64,
    /// `eps < 1 - exp(-rho)`, where the unconstrained capacity equals the
    /// Poisson one.
    pub valid: bool,
    /// Known only when `valid`.
    pub unconstrained: Option<f64>,
    pub lower: f64,
    pub constrained: ConstrainedCapacity,
    pub summary: BetaSummary,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid(
            "epsilon",
            "outage target must lie in (0, 1)",
        ));
    }
    Ok(())
}

fn check_link(cfg: &NetworkConfig) -> Result<()> {
    if cfg.noise != 0.0 {
        return Err(Error::Unsupported(
            "transmission capacity assumes no noise".into(),
        ));
    }
    cfg.validate()
}

pub fn transmission_capacity(
    cfg: &NetworkConfig,
    epsilon: f64,
    spec: &QuadratureSpec,
) -> Result<CapacityResult> {
    check_epsilon(epsilon)?;
    check_link(cfg)?;
    let summary = beta_summary(cfg, spec)?;
    let poisson = poisson_capacity(epsilon, summary.beta_i);
    let rho = summary.kappa / summary.beta_hat;
    let valid = epsilon < -(-rho).exp_m1();
    let constrained = constrained_with_summary(cfg, epsilon, &summary, spec)?;
    Ok(CapacityResult {
        epsilon,
        poisson,
        rho,
        valid,
        unconstrained: valid.then_some(poisson),
        lower: poisson,
        constrained,
        summary,
    })
}

/// Capacity at the parent intensity of `cfg`, optimised over the mean
/// cluster size.
pub fn constrained_capacity(
    cfg: &NetworkConfig,
    epsilon: f64,
    spec: &QuadratureSpec,
) -> Result<ConstrainedCapacity> {
    check_epsilon(epsilon)?;
    check_link(cfg)?;
    let summary = beta_summary(cfg, spec)?;
    constrained_with_summary(cfg, epsilon, &summary, spec)
}

fn constrained_with_summary(
    cfg: &NetworkConfig,
    epsilon: f64,
    b: &BetaSummary,
    spec: &QuadratureSpec,
) -> Result<ConstrainedCapacity> {
    let lp = cfg.cluster.parent_intensity;
    if !(lp > 0.0) {
        return Err(Error::invalid(
            "parent_intensity",
            "constrained capacity needs a positive parent intensity",
        ));
    }
    let cp = poisson_capacity(epsilon, b.beta_i);
    let log_term = -(-epsilon).ln_1p();
    let denom = lp - b.beta_hat / b.beta_i * log_term;
    let upper = if denom > 0.0 {
        lp * cp / denom
    } else {
        f64::INFINITY
    };
    let c = invert_outage(cfg, epsilon, spec)?;
    Ok(ConstrainedCapacity {
        lower: lp * cp / (lp + b.f_hat_star),
        upper,
        first_order: (1.0 - epsilon) * epsilon * lp / (lp * b.beta_i + b.kappa),
        exact: (1.0 - epsilon) * lp * c,
        mean_cluster_size: c,
    })
}

/// Mean cluster size at which the outage probability equals `epsilon`.
fn invert_outage(cfg: &NetworkConfig, epsilon: f64, spec: &QuadratureSpec) -> Result<f64> {
    let lp = cfg.cluster.parent_intensity;
    let outage =
        |c: f64| success_probability(&cfg.with_intensities(lp, c), spec).map(|p| 1.0 - p.value);
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut doublings = 0;
    while outage(hi)? <= epsilon {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::NonConvergence {
                operation: "invert_outage",
                subdivisions: doublings,
                last: hi,
                previous: lo,
                error: f64::INFINITY,
            });
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if outage(mid)? <= epsilon {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-10 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Best density found when optimising over both intensities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnconstrainedSearch {
    /// Density of transmissions `lambda_p c` at outage `epsilon`.
    pub intensity: f64,
    pub parent_intensity: f64,
    pub mean_cluster_size: f64,
    /// `(1 - eps) lambda_p c`.
    pub capacity: f64,
}

/// Maximises `lambda_p c` subject to outage `epsilon` over a log grid of `c`
/// in `[1e-6, 1e2]`, refined by golden-section search. For each `c` the
/// parent intensity meeting the target has a closed form.
pub fn unconstrained_capacity_search(
    cfg: &NetworkConfig,
    epsilon: f64,
    spec: &QuadratureSpec,
) -> Result<UnconstrainedSearch> {
    check_epsilon(epsilon)?;
    check_link(cfg)?;
    let kernel = success_kernel(cfg);
    let s = cfg.cluster.scattering;
    let feasible = |c: f64| -> Result<(f64, f64)> {
        let rep = representative_deficit(&kernel, &cfg.with_intensities(0.0, c).cluster, spec)?;
        let a = integrate_over_plane(&kernel, &s, spec, |_, w| -(-c * w).exp_m1() / c)
            .map_err(|e| e.in_operation("unconstrained_capacity"))?
            .value;
        let budget = (-rep.value).ln_1p() - (-epsilon).ln_1p();
        if budget <= 0.0 || a <= 0.0 {
            return Ok((0.0, 0.0));
        }
        let intensity = budget / a;
        Ok((intensity, intensity / c))
    };
    let n = 81;
    let grid: Vec<f64> = (0..n)
        .map(|i| 10f64.powf(-6.0 + 8.0 * i as f64 / (n - 1) as f64))
        .collect();
    let mut values = Vec::with_capacity(n);
    for &c in &grid {
        values.push(feasible(c)?.0);
    }
    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let (mut a, mut b) = (
        grid[best.saturating_sub(1)].ln(),
        grid[(best + 1).min(n - 1)].ln(),
    );
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = feasible(x1.exp())?.0;
    let mut f2 = feasible(x2.exp())?.0;
    for _ in 0..40 {
        if b - a < 1e-6 {
            break;
        }
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = feasible(x1.exp())?.0;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = feasible(x2.exp())?.0;
        }
    }
    let mut c = grid[best];
    let mut top = values[best];
    for (x, f) in [(x1, f1), (x2, f2)] {
        if f > top {
            top = f;
            c = x.exp();
        }
    }
    let (intensity, lp) = feasible(c)?;
    Ok(UnconstrainedSearch {
        intensity,
        parent_intensity: lp,
        mean_cluster_size: c,
        capacity: (1.0 - epsilon) * intensity,
    })
}

/// Constrained capacities of frequency hopping and direct sequence with
/// spreading gain `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadSpectrum {
    pub frequency_hopping: f64,
    pub direct_sequence: f64,
    /// `ln(C_FH / C_DS) / ln M`; undefined for `M = 1`.
    pub log_ratio: Option<f64>,
}

/// Frequency hopping over `m` bands splits every cluster across the bands,
/// so its capacity is `m C*(eps, T)`; direct sequence lowers the threshold
/// to `T / m`.
pub fn spread_spectrum_compare(
    cfg: &NetworkConfig,
    epsilon: f64,
    m: u32,
    spec: &QuadratureSpec,
) -> Result<SpreadSpectrum> {
    if m == 0 {
        return Err(Error::invalid("m", "spreading gain must be at least 1"));
    }
    let fh = m as f64 * constrained_capacity(cfg, epsilon, spec)?.exact;
    let ds = if m == 1 {
        fh
    } else {
        constrained_capacity(&cfg.with_threshold(cfg.threshold / m as f64), epsilon, spec)?.exact
    };
    Ok(SpreadSpectrum {
        frequency_hopping: fh,
        direct_sequence: ds,
        log_ratio: (m > 1).then(|| (fh / ds).ln() / (m as f64).ln()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{FadingModel, PathLoss};
    use crate::geometry::ClusterModel;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn cfg() -> NetworkConfig {
        NetworkConfig::new(
            ClusterModel::thomas(1.0, 1.0, 0.25),
            PathLoss::singular(4.0),
            FadingModel::rayleigh(1.0),
            1.0,
            1.0,
        )
    }

    #[test]
    fn poisson_capacity_values() {
        assert_relative_eq!(
            poisson_capacity(0.1, PI * PI / 2.0),
            0.9 * (10f64 / 9.0).ln() / (PI * PI / 2.0),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            poisson_capacity(0.1, PI * PI / 2.0),
            0.01922,
            max_relative = 1e-3
        );
        let e = 1e-3;
        assert_relative_eq!(
            poisson_capacity(e, 2.0),
            e * (1.0 - e) / 2.0,
            max_relative = 1e-2
        );
    }

    #[test]
    fn constrained_bounds_bracket_exact() {
        let spec = QuadratureSpec::default();
        let r = transmission_capacity(&cfg(), 0.1, &spec).unwrap();
        let c = r.constrained;
        assert!(c.lower <= c.exact && c.exact <= c.upper, "{c:?}");
        assert!(r.valid == (0.1 < 1.0 - (-r.rho).exp()));
    }

    #[test]
    fn first_order_for_small_outage() {
        let c = constrained_capacity(&cfg(), 1e-3, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(c.exact / c.first_order, 1.0, epsilon = 2e-2);
    }

    #[test]
    fn spread_spectrum_identity() {
        let s = spread_spectrum_compare(&cfg(), 0.05, 1, &QuadratureSpec::default()).unwrap();
        assert_eq!(s.frequency_hopping, s.direct_sequence);
        assert_eq!(s.log_ratio, None);
    }
}
