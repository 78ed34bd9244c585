//! Brute-force simulation of interference and link success, the reference
//! against which the analytic formulas are checked.

use rand::Rng;
use rand_distr::Distribution;
use rayon::prelude::*;

use crate::channel::FadingSampler;
use crate::error::{Error, Result};
use crate::geometry::Window;
use crate::network::NetworkConfig;
use crate::rng::{StreamRng, Streams};

/// Monte Carlo budget and truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSpec {
    pub trials: usize,
    pub seed: u64,
    /// Relative tolerance on the mean interference lost by simulating only
    /// a disc around the receiver.
    pub tail_tolerance: f64,
    /// Explicit simulation radius, overriding the one derived from
    /// `tail_tolerance`.
    pub radius: Option<f64>,
}

impl Default for SimSpec {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 0,
            tail_tolerance: 1e-3,
            radius: None,
        }
    }
}

impl SimSpec {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            ..Self::default()
        }
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.radius = Some(r);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials", "at least one trial is required"));
        }
        if !(self.tail_tolerance > 0.0) {
            return Err(Error::invalid("tail_tolerance", "must be positive"));
        }
        if let Some(r) = self.radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::invalid(
                    "radius",
                    "simulation radius must be positive",
                ));
            }
        }
        Ok(())
    }
}

/// Estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: usize,
    pub radius: f64,
}

/// Result of a two-sample Kolmogorov-Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsTest {
    pub statistic: f64,
    pub p_value: f64,
}

/// Sorted Monte Carlo samples.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    values: Vec<f64>,
    pub seed: u64,
    pub radius: f64,
}

impl EmpiricalDistribution {
    pub fn new(mut values: Vec<f64>, seed: u64, radius: f64) -> Self {
        values.sort_by(f64::total_cmp);
        Self {
            values,
            seed,
            radius,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Fraction of samples `>= y`.
    pub fn ccdf(&self, y: f64) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        let below = self.values.partition_point(|&v| v < y);
        (self.values.len() - below) as f64 / self.values.len() as f64
    }

    pub fn ccdf_std_error(&self, y: f64) -> f64 {
        let p = self.ccdf(y);
        (p * (1.0 - p) / self.values.len().max(1) as f64).sqrt()
    }

    /// Half-width of the normal-approximation 95% interval of the CCDF.
    pub fn ccdf_halfwidth(&self, y: f64) -> f64 {
        1.959_963_984_540_054 * self.ccdf_std_error(y)
    }

    pub fn quantile(&self, q: f64) -> f64 {
        let n = self.values.len();
        if n == 0 {
            return f64::NAN;
        }
        let k = ((q.clamp(0.0, 1.0) * n as f64).ceil() as usize).clamp(1, n);
        self.values[k - 1]
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    pub fn mean(&self) -> McEstimate {
        let n = self.values.len();
        let mean = self.values.iter().sum::<f64>() / n as f64;
        let var =
            self.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n.max(2) - 1) as f64;
        McEstimate {
            value: mean,
            std_error: (var / n as f64).sqrt(),
            trials: n,
            radius: self.radius,
        }
    }

    /// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
    pub fn ks_two_sample(&self, other: &EmpiricalDistribution) -> KsTest {
        let (a, b) = (&self.values, &other.values);
        let (na, nb) = (a.len() as f64, b.len() as f64);
        let (mut i, mut j) = (0, 0);
        let mut d: f64 = 0.0;
        while i < a.len() && j < b.len() {
            let x = a[i].min(b[j]);
            while i < a.len() && a[i] <= x {
                i += 1;
            }
            while j < b.len() && b[j] <= x {
                j += 1;
            }
            d = d.max((i as f64 / na - j as f64 / nb).abs());
        }
        let en = (na * nb / (na + nb)).sqrt();
        KsTest {
            statistic: d,
            p_value: kolmogorov_q((en + 0.12 + 0.11 / en) * d),
        }
    }
}

fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for j in 1..=100 {
        let term = sign * (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-16 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Radius of the disc around the receiver outside of which the mean
/// interference is at most `tail_tolerance * reference`.
///
/// The fading mean is replaced by the mean truncated at its 0.999 quantile
/// when it is infinite. The disc always contains the whole cluster of the
/// typical transmitter.
pub fn simulation_radius(cfg: &NetworkConfig, reference: f64, tail_tolerance: f64) -> Result<f64> {
    let lambda = cfg.cluster.intensity();
    let minimum = cfg.link_distance + 2.0 * cfg.cluster.scattering.sampler_reach();
    if lambda <= 0.0 {
        return Ok(minimum.max(1e-9));
    }
    let mean_h = cfg.fading.effective_mean();
    let target = tail_tolerance * reference / (lambda * mean_h);
    Ok(cfg.pathloss.tail_radius(target)?.max(minimum))
}

fn resolve_radius(cfg: &NetworkConfig, spec: &SimSpec, reference: f64) -> Result<f64> {
    match spec.radius {
        Some(r) => Ok(r.max(cfg.link_distance + 2.0 * cfg.cluster.scattering.sampler_reach())),
        None => simulation_radius(cfg, reference, spec.tail_tolerance),
    }
}

fn interference_trial<R: Rng + ?Sized>(
    cfg: &NetworkConfig,
    window: &Window,
    conditioned: bool,
    fading: &FadingSampler,
    rng: &mut R,
) -> f64 {
    let z = cfg.receiver();
    let pl = cfg.pathloss;
    let mut total = 0.0;
    let mut add = |p: crate::geometry::Point, rng: &mut R| {
        total += fading.sample(rng) * pl.radial_sq(p.dist_sq(z));
    };
    cfg.cluster.visit_ordinary(window, rng, &mut add);
    if conditioned {
        cfg.cluster.visit_representative(window, rng, &mut add);
    }
    total
}

fn simulation_window(cfg: &NetworkConfig, radius: f64) -> Result<Window> {
    Window::new(cfg.receiver(), radius)
}

/// Samples of the interference at the receiver. With `conditioned` the
/// transmitters follow the reduced Palm distribution (a transmitter at the
/// origin, excluded from the sum).
pub fn simulate_interference(
    cfg: &NetworkConfig,
    spec: &SimSpec,
    conditioned: bool,
) -> Result<EmpiricalDistribution> {
    cfg.validate()?;
    spec.validate()?;
    let reference = cfg.fading.effective_mean() * cfg.link_gain();
    let radius = resolve_radius(cfg, spec, reference)?;
    let window = simulation_window(cfg, radius)?;
    let streams = Streams::new(spec.seed);
    let fading = cfg.fading.sampler();
    let values: Vec<f64> = (0..spec.trials as u64)
        .into_par_iter()
        .map(|i| interference_trial(cfg, &window, conditioned, &fading, &mut streams.trial(i)))
        .collect();
    Ok(EmpiricalDistribution::new(values, spec.seed, radius))
}

/// Sample mean of the interference at the receiver.
pub fn empirical_mean_interference(
    cfg: &NetworkConfig,
    spec: &SimSpec,
    conditioned: bool,
) -> Result<McEstimate> {
    cfg.validate()?;
    if cfg.pathloss.is_singular() {
        return Err(Error::DivergentMean(
            "singular path loss has an infinite mean interference",
        ));
    }
    if cfg.fading.mean().is_err() {
        return Err(Error::DivergentMean(
            "the fading distribution has an infinite mean",
        ));
    }
    let total = cfg.pathloss.tail_integral(0.0)?;
    let spec = SimSpec {
        radius: match spec.radius {
            Some(r) => Some(r),
            None => Some(simulation_radius(
                cfg,
                total * cfg.cluster.intensity() * cfg.fading.effective_mean(),
                spec.tail_tolerance,
            )?),
        },
        ..*spec
    };
    Ok(simulate_interference(cfg, &spec, conditioned)?.mean())
}

/// Fraction of trials in which the link meets the SIR threshold, with
/// independent transmitter positions and fading in every trial.
pub fn simulate_success_probability(cfg: &NetworkConfig, spec: &SimSpec) -> Result<McEstimate> {
    cfg.validate()?;
    spec.validate()?;
    let signal = cfg.link_gain();
    let reference = cfg.fading.effective_mean() * signal / cfg.threshold;
    let radius = resolve_radius(cfg, spec, reference)?;
    let window = simulation_window(cfg, radius)?;
    let streams = Streams::new(spec.seed);
    let fading = cfg.fading.sampler();
    let hits: Vec<bool> = (0..spec.trials as u64)
        .into_par_iter()
        .map(|i| {
            let rng = &mut streams.trial(i);
            let interference = interference_trial(cfg, &window, true, &fading, rng);
            let h = fading.sample(rng);
            h * signal >= cfg.threshold * (cfg.noise + interference)
        })
        .collect();
    let n = hits.len();
    let p = hits.iter().filter(|&&b| b).count() as f64 / n as f64;
    Ok(McEstimate {
        value: p,
        std_error: (p * (1.0 - p) / n as f64).sqrt(),
        trials: n,
        radius,
    })
}

/// Success estimates on the same trials with transmitters cropped to the
/// simulation disc and to the disc of twice its radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationAudit {
    pub inner: McEstimate,
    pub outer: McEstimate,
    /// Trials whose outcome differs between the two radii.
    pub flips: usize,
}

/// Runs [`simulate_success_probability`] at the doubled radius and records,
/// trial by trial, whether cropping to the original radius changes the
/// outcome.
pub fn truncation_audit(cfg: &NetworkConfig, spec: &SimSpec) -> Result<TruncationAudit> {
    cfg.validate()?;
    spec.validate()?;
    let signal = cfg.link_gain();
    let reference = cfg.fading.effective_mean() * signal / cfg.threshold;
    let radius = resolve_radius(cfg, spec, reference)?;
    let window = simulation_window(cfg, 2.0 * radius)?;
    let streams = Streams::new(spec.seed);
    let fading = cfg.fading.sampler();
    let z = cfg.receiver();
    let r2 = radius * radius;
    let pl = cfg.pathloss;
    let outcomes: Vec<(bool, bool)> = (0..spec.trials as u64)
        .into_par_iter()
        .map(|i| {
            let rng = &mut streams.trial(i);
            let mut inner = 0.0;
            let mut outer = 0.0;
            let mut add = |p: crate::geometry::Point, rng: &mut StreamRng| {
                let d2 = p.dist_sq(z);
                let v = fading.sample(rng) * pl.radial_sq(d2);
                outer += v;
                if d2 <= r2 {
                    inner += v;
                }
            };
            cfg.cluster.visit_ordinary(&window, rng, &mut add);
            cfg.cluster.visit_representative(&window, rng, &mut add);
            let h = fading.sample(rng) * signal;
            (
                h >= cfg.threshold * (cfg.noise + inner),
                h >= cfg.threshold * (cfg.noise + outer),
            )
        })
        .collect();
    let n = outcomes.len();
    let estimate = |k: usize, r: f64| {
        let p = k as f64 / n as f64;
        McEstimate {
            value: p,
            std_error: (p * (1.0 - p) / n as f64).sqrt(),
            trials: n,
            radius: r,
        }
    };
    Ok(TruncationAudit {
        inner: estimate(outcomes.iter().filter(|o| o.0).count(), radius),
        outer: estimate(outcomes.iter().filter(|o| o.1).count(), 2.0 * radius),
        flips: outcomes.iter().filter(|o| o.0 != o.1).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{FadingModel, PathLoss};
    use crate::geometry::ClusterModel;

    fn cfg() -> NetworkConfig {
        NetworkConfig::new(
            ClusterModel::thomas(1.0, 5.0, 0.25),
            PathLoss::singular(4.0),
            FadingModel::rayleigh(1.0),
            1.0,
            0.5,
        )
    }

    #[test]
    fn empirical_distribution_queries() {
        let d = EmpiricalDistribution::new(vec![3.0, 1.0, 2.0, 4.0], 0, 1.0);
        assert_eq!(d.values(), &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(d.ccdf(2.0), 0.75);
        assert_eq!(d.ccdf(2.5), 0.5);
        assert_eq!(d.ccdf(5.0), 0.0);
        assert_eq!(d.quantile(0.5), 2.0);
        assert_eq!(d.quantile(1.0), 4.0);
        assert_eq!(d.mean().value, 2.5);
        let same = d.ks_two_sample(&d);
        assert_eq!(same.statistic, 0.0);
        assert_eq!(same.p_value, 1.0);
    }

    #[test]
    fn ks_detects_shift() {
        let a = EmpiricalDistribution::new((0..1000).map(|i| i as f64).collect(), 0, 1.0);
        let b = EmpiricalDistribution::new((0..1000).map(|i| i as f64 + 300.0).collect(), 0, 1.0);
        let t = a.ks_two_sample(&b);
        assert!((t.statistic - 0.3).abs() < 1e-12);
        assert!(t.p_value < 1e-10);
    }

    #[test]
    fn degenerate_inputs() {
        let empty = cfg().with_cluster(ClusterModel::thomas(0.0, 0.0, 0.25));
        let d = simulate_interference(&empty, &SimSpec::new(200, 1), false).unwrap();
        assert!(d.values().iter().all(|&v| v == 0.0));
        let p = simulate_success_probability(&empty, &SimSpec::new(200, 1)).unwrap();
        assert_eq!(p.value, 1.0);
        let easy = cfg().with_threshold(1e-12);
        assert_eq!(
            simulate_success_probability(&easy, &SimSpec::new(200, 1))
                .unwrap()
                .value,
            1.0
        );
        assert!(matches!(
            empirical_mean_interference(&cfg(), &SimSpec::new(10, 1), true),
            Err(Error::DivergentMean(_))
        ));
    }

    #[test]
    fn thread_count_invariance() {
        let spec = SimSpec::new(400, 11).with_radius(6.0);
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| simulate_interference(&cfg(), &spec, true).unwrap());
        let b = four.install(|| simulate_interference(&cfg(), &spec, true).unwrap());
        assert_eq!(a, b);
        let pa = one.install(|| simulate_success_probability(&cfg(), &spec).unwrap());
        let pb = four.install(|| simulate_success_probability(&cfg(), &spec).unwrap());
        assert_eq!(pa, pb);
    }

    #[test]
    fn radius_respects_tail_budget() {
        let c = cfg();
        let r = simulation_radius(&c, 16.0, 1e-3).unwrap();
        let lost = c.cluster.intensity() * c.pathloss.tail_integral(r).unwrap();
        assert!(lost <= 16.0 * 1e-3 * (1.0 + 1e-9));
        let tiny = simulation_radius(&c, 1e12, 1e-3).unwrap();
        assert!(tiny >= 0.5 + 2.0 * 6.0 * 0.25);
    }
}
