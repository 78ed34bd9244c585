//! Experiment files: a TOML document with a `[network]` table, an optional
//! sweep axis and per-experiment settings. Everything missing is filled in by
//! [`ExperimentConfig::resolve`].

use std::fmt;
use std::path::{Path, PathBuf};

use clusternet::metrics::MAX_NAKAGAMI_SHAPE;
use clusternet::{
    ClusterModel, FadingModel, NetworkConfig, PathLoss, PathLossKind, QuadratureSpec, SimSpec,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Ccdf,
    SuccessCurve,
    GainCurve,
    CapacitySweep,
    SpreadSpectrum,
    Validate,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Ccdf => "ccdf",
            Experiment::SuccessCurve => "success-curve",
            Experiment::GainCurve => "gain-curve",
            Experiment::CapacitySweep => "capacity-sweep",
            Experiment::SpreadSpectrum => "spread-spectrum",
            Experiment::Validate => "validate",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Thomas,
    Matern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathLossName {
    Singular,
    Bounded,
    Clipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Fading {
    Rayleigh {
        #[serde(default = "one")]
        rate: f64,
    },
    Nakagami {
        m: u32,
        #[serde(default = "one")]
        omega: f64,
    },
    Pareto {
        k: f64,
        sigma: f64,
        #[serde(default)]
        theta: f64,
    },
}

impl Default for Fading {
    fn default() -> Self {
        Fading::Rayleigh { rate: 1.0 }
    }
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Network {
    #[serde(default = "default_model")]
    pub model: Model,
    #[serde(default = "one")]
    pub parent_intensity: f64,
    #[serde(default = "default_cluster_size")]
    pub mean_cluster_size: f64,
    /// Gaussian standard deviation (Thomas) or disc radius (Matern).
    #[serde(default = "default_scale")]
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_count: Option<u32>,
    #[serde(default = "default_pathloss")]
    pub pathloss: PathLossName,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub fading: Fading,
    #[serde(default = "one")]
    pub threshold: f64,
    #[serde(default = "default_link")]
    pub link_distance: f64,
    #[serde(default)]
    pub noise: f64,
}

fn default_model() -> Model {
    Model::Thomas
}
fn default_cluster_size() -> f64 {
    5.0
}
fn default_scale() -> f64 {
    0.25
}
fn default_pathloss() -> PathLossName {
    PathLossName::Singular
}
fn default_alpha() -> f64 {
    4.0
}
fn default_link() -> f64 {
    0.5
}

impl Default for Network {
    fn default() -> Self {
        toml::from_str("").expect("defaults")
    }
}

/// Quantities a sweep or a series may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    LinkDistance,
    Threshold,
    ParentIntensity,
    MeanClusterSize,
    /// Transmitter intensity, with the mean cluster size held fixed.
    Intensity,
    Scale,
    Alpha,
    Noise,
    /// Interference level of the CCDF.
    Y,
    Epsilon,
    Spreading,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::LinkDistance => "link_distance",
            Param::Threshold => "threshold",
            Param::ParentIntensity => "parent_intensity",
            Param::MeanClusterSize => "mean_cluster_size",
            Param::Intensity => "intensity",
            Param::Scale => "scale",
            Param::Alpha => "alpha",
            Param::Noise => "noise",
            Param::Y => "y",
            Param::Epsilon => "epsilon",
            Param::Spreading => "spreading",
        }
    }

    fn is_network(self) -> bool {
        !matches!(self, Param::Y | Param::Epsilon | Param::Spreading)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Lin,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: Param,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<Spacing>,
    /// Explicit values, instead of `min`, `max` and `points`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl Sweep {
    fn grid(parameter: Param, min: f64, max: f64, points: usize, spacing: Spacing) -> Self {
        Self {
            parameter,
            min: Some(min),
            max: Some(max),
            points: Some(points),
            spacing: Some(spacing),
            values: None,
        }
    }

    fn list(parameter: Param, values: Vec<f64>) -> Self {
        Self {
            parameter,
            min: None,
            max: None,
            points: None,
            spacing: None,
            values: Some(values),
        }
    }

    /// The sweep values in order.
    pub fn values(&self) -> Result<Vec<f64>, String> {
        if let Some(v) = &self.values {
            if self.min.is_some() || self.max.is_some() || self.points.is_some() {
                return Err("sweep: give either `values` or `min`/`max`/`points`, not both".into());
            }
            if v.len() < 2 {
                return Err("sweep.values: at least 2 values are required".into());
            }
            return Ok(v.clone());
        }
        let (Some(min), Some(max), Some(points)) = (self.min, self.max, self.points) else {
            return Err(
                "sweep: `min`, `max` and `points` are required when `values` is absent".into(),
            );
        };
        if points < 2 {
            return Err(format!("sweep.points: must be at least 2, got {points}"));
        }
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(format!("sweep: need finite min < max, got {min} and {max}"));
        }
        let n = (points - 1) as f64;
        match self.spacing.unwrap_or(Spacing::Lin) {
            Spacing::Lin => Ok((0..points)
                .map(|i| min + (max - min) * i as f64 / n)
                .collect()),
            Spacing::Log => {
                if min <= 0.0 {
                    return Err("sweep: log spacing needs min > 0".into());
                }
                let (a, b) = (min.ln(), max.ln());
                Ok((0..points)
                    .map(|i| (a + (b - a) * i as f64 / n).exp())
                    .collect())
            }
        }
    }
}

/// A second axis: one curve per value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Series {
    pub parameter: Param,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Simulation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enabled: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default = "default_tail")]
    pub tail_tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
}

fn default_tail() -> f64 {
    1e-3
}

impl Default for Simulation {
    fn default() -> Self {
        toml::from_str("").expect("defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quadrature {
    #[serde(default = "default_rel")]
    pub rel_tol: f64,
    #[serde(default = "default_abs")]
    pub abs_tol: f64,
    #[serde(default = "default_outer")]
    pub outer_radius: f64,
    #[serde(default = "default_subdivisions")]
    pub max_subdivisions: usize,
}

fn default_rel() -> f64 {
    QuadratureSpec::default().rel_tol
}
fn default_abs() -> f64 {
    QuadratureSpec::default().abs_tol
}
fn default_outer() -> f64 {
    QuadratureSpec::default().outer_radius
}
fn default_subdivisions() -> usize {
    QuadratureSpec::default().max_subdivisions
}

impl Default for Quadrature {
    fn default() -> Self {
        toml::from_str("").expect("defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ccdf {
    /// Condition on a transmitter at the origin (reduced Palm law).
    #[serde(default = "yes")]
    pub conditioned: bool,
}

fn yes() -> bool {
    true
}

impl Default for Ccdf {
    fn default() -> Self {
        Self { conditioned: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Capacity {
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Also search over parent intensity and cluster size.
    #[serde(default)]
    pub unconstrained: bool,
    #[serde(default = "default_spreading")]
    pub spreading: u32,
}

fn default_epsilon() -> f64 {
    0.01
}
fn default_spreading() -> u32 {
    1
}

impl Default for Capacity {
    fn default() -> Self {
        toml::from_str("").expect("defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub network: Network,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<Series>,
    #[serde(default)]
    pub simulation: Simulation,
    #[serde(default)]
    pub quadrature: Quadrature,
    #[serde(default)]
    pub ccdf: Ccdf,
    #[serde(default)]
    pub capacity: Capacity,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        toml::from_str("").expect("defaults")
    }
}

/// Reads a TOML experiment file, or the JSON sidecar of an earlier run.
pub fn load(path: &Path) -> Result<ExperimentConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if path.extension().is_some_and(|e| e == "json") {
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let inner = value.get("config").cloned().unwrap_or(value);
        serde_json::from_value(inner).map_err(|e| format!("{}: {e}", path.display()))
    } else {
        toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

impl ExperimentConfig {
    /// Fills every default that depends on the experiment and checks the
    /// combination.
    pub fn resolve(mut self, experiment: Experiment) -> Result<Self, String> {
        if let Some(declared) = self.experiment {
            if declared != experiment {
                return Err(format!(
                    "experiment: file declares `{declared}` but `{experiment}` was requested"
                ));
            }
        }
        self.experiment = Some(experiment);
        if self.sweep.is_none() && experiment != Experiment::Validate {
            self.sweep = Some(default_sweep(experiment));
        }
        if self.simulation.enabled.is_none() {
            self.simulation.enabled = Some(experiment == Experiment::Ccdf);
        }
        if self.simulation.trials.is_none() {
            self.simulation.trials = Some(if experiment == Experiment::Validate {
                400_000
            } else {
                100_000
            });
        }
        self.check()?;
        Ok(self)
    }

    fn check(&self) -> Result<(), String> {
        let experiment = self.experiment.expect("resolved");
        self.quadrature_spec()
            .validate()
            .map_err(|e| format!("quadrature: {e}"))?;
        if self.simulate() {
            self.sim_spec(0)
                .validate()
                .map_err(|e| format!("simulation: {e}"))?;
        }
        let Some(sweep) = &self.sweep else {
            return self
                .network_config()
                .validate()
                .map_err(|e| format!("network: {e}"));
        };
        let values = sweep.values()?;
        let allowed: &[Param] = match experiment {
            Experiment::Ccdf => &[Param::Y],
            Experiment::CapacitySweep => &[Param::Epsilon],
            Experiment::SpreadSpectrum => &[Param::Spreading],
            _ => &[],
        };
        let check_axis = |p: Param, what: &str| -> Result<(), String> {
            if !p.is_network() && !allowed.contains(&p) {
                return Err(format!(
                    "{what}.parameter: `{}` cannot be varied in a {experiment} experiment",
                    p.name()
                ));
            }
            Ok(())
        };
        check_axis(sweep.parameter, "sweep")?;
        if experiment == Experiment::Ccdf && sweep.parameter != Param::Y {
            return Err(
                "sweep.parameter: a ccdf experiment sweeps the interference level `y`".into(),
            );
        }
        if experiment == Experiment::SpreadSpectrum && sweep.parameter != Param::Spreading {
            return Err("sweep.parameter: a spread-spectrum experiment sweeps the spreading gain `spreading`".into());
        }
        let series = match &self.series {
            Some(s) => {
                check_axis(s.parameter, "series")?;
                if s.parameter == sweep.parameter {
                    return Err("series.parameter: must differ from the sweep parameter".into());
                }
                if s.values.is_empty() {
                    return Err("series.values: at least one value is required".into());
                }
                s.values.iter().map(|&v| Some((s.parameter, v))).collect()
            }
            None => vec![None],
        };
        for &v in &values {
            for s in &series {
                let point = Point::new(*s, (sweep.parameter, v));
                let cfg = self.at(&point);
                cfg.validate()
                    .map_err(|e| format!("network at {}: {e}", point.label()))?;
                let settings = self.settings(&point);
                self.guard(experiment, &cfg, &settings)
                    .map_err(|e| format!("{e} (at {})", point.label()))?;
            }
        }
        Ok(())
    }

    fn guard(
        &self,
        experiment: Experiment,
        cfg: &NetworkConfig,
        s: &Settings,
    ) -> Result<(), String> {
        let fixed = matches!(cfg.cluster.count_law, clusternet::CountLaw::FixedCount(_));
        match (experiment, cfg.fading) {
            (Experiment::SuccessCurve, FadingModel::GeneralizedPareto { .. }) => {
                return Err("network.fading: the success curve has no analytic form under Pareto fading; \
                            use model = \"rayleigh\" or \"nakagami\", or study the interference with the ccdf experiment"
                    .into())
            }
            (Experiment::SuccessCurve, FadingModel::Nakagami { m, .. }) => {
                if fixed {
                    return Err("network.fixed_count: Nakagami success needs a Poisson number of daughters per cluster; \
                                remove fixed_count or use Rayleigh fading"
                        .into());
                }
                if m > MAX_NAKAGAMI_SHAPE {
                    return Err(format!("network.fading.m: Nakagami success is supported for m <= {MAX_NAKAGAMI_SHAPE}, got {m}"));
                }
                if cfg.noise != 0.0 {
                    return Err("network.noise: Nakagami success is only available without noise".into());
                }
            }
            (Experiment::GainCurve | Experiment::CapacitySweep | Experiment::SpreadSpectrum, f) => {
                if !matches!(f, FadingModel::Rayleigh { .. }) {
                    return Err(format!("network.fading: the {experiment} experiment needs Rayleigh fading"));
                }
                if fixed {
                    return Err(format!("network.fixed_count: the {experiment} experiment needs a Poisson number of daughters"));
                }
            }
            _ => {}
        }
        if experiment == Experiment::SuccessCurve && fixed && cfg.noise != 0.0 {
            return Err(
                "network.noise: fixed-count success is only available without noise".into(),
            );
        }
        if matches!(experiment, Experiment::GainCurve) && cfg.noise != 0.0 {
            return Err("network.noise: the clustering gain is defined without noise".into());
        }
        if matches!(
            experiment,
            Experiment::CapacitySweep | Experiment::SpreadSpectrum
        ) && !(s.epsilon > 0.0 && s.epsilon < 1.0)
        {
            return Err(format!(
                "capacity.epsilon: must lie in (0, 1), got {}",
                s.epsilon
            ));
        }
        if experiment == Experiment::SpreadSpectrum
            && !(s.spreading >= 1.0 && s.spreading.fract() == 0.0)
        {
            return Err(format!(
                "sweep.values: spreading gains must be positive integers, got {}",
                s.spreading
            ));
        }
        if experiment == Experiment::Ccdf
            && s.y.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
        {
            return Err(format!(
                "sweep: interference levels must be positive, got {}",
                s.y
            ));
        }
        Ok(())
    }

    pub fn simulate(&self) -> bool {
        self.simulation.enabled.unwrap_or(false)
    }

    pub fn quadrature_spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: self.quadrature.rel_tol,
            abs_tol: self.quadrature.abs_tol,
            outer_radius: self.quadrature.outer_radius,
            inner_radius: None,
            max_subdivisions: self.quadrature.max_subdivisions,
        }
    }

    pub fn sim_spec(&self, seed: u64) -> SimSpec {
        SimSpec {
            trials: self.simulation.trials.unwrap_or(100_000),
            seed,
            tail_tolerance: self.simulation.tail_tolerance,
            radius: self.simulation.radius,
        }
    }

    /// The network of the `[network]` table, before any sweep is applied.
    pub fn network_config(&self) -> NetworkConfig {
        let n = &self.network;
        let mut cluster = match n.model {
            Model::Thomas => ClusterModel::thomas(n.parent_intensity, n.mean_cluster_size, n.scale),
            Model::Matern => ClusterModel::matern(n.parent_intensity, n.mean_cluster_size, n.scale),
        };
        if let Some(c) = n.fixed_count {
            cluster = cluster.with_fixed_count(c);
        }
        let kind = match n.pathloss {
            PathLossName::Singular => PathLossKind::Singular,
            PathLossName::Bounded => PathLossKind::Bounded,
            PathLossName::Clipped => PathLossKind::ClippedSingular,
        };
        let fading = match n.fading {
            Fading::Rayleigh { rate } => FadingModel::Rayleigh { rate },
            Fading::Nakagami { m, omega } => FadingModel::Nakagami { m, omega },
            Fading::Pareto { k, sigma, theta } => {
                FadingModel::GeneralizedPareto { k, sigma, theta }
            }
        };
        NetworkConfig::new(
            cluster,
            PathLoss {
                kind,
                alpha: n.alpha,
            },
            fading,
            n.threshold,
            n.link_distance,
        )
        .with_noise(n.noise)
    }

    /// Network at a sweep point.
    pub fn at(&self, point: &Point) -> NetworkConfig {
        let mut cfg = self.network_config();
        for (p, v) in point.assignments() {
            cfg = apply(cfg, p, v);
        }
        cfg
    }

    pub fn settings(&self, point: &Point) -> Settings {
        let mut s = Settings {
            y: 1.0,
            epsilon: self.capacity.epsilon,
            spreading: self.capacity.spreading as f64,
        };
        for (p, v) in point.assignments() {
            match p {
                Param::Y => s.y = v,
                Param::Epsilon => s.epsilon = v,
                Param::Spreading => s.spreading = v,
                _ => {}
            }
        }
        s
    }

    /// Every (series, sweep) point in output order.
    pub fn points(&self) -> Vec<Point> {
        let Some(sweep) = &self.sweep else {
            return Vec::new();
        };
        let values = sweep.values().expect("checked in resolve");
        let series: Vec<Option<(Param, f64)>> = match &self.series {
            Some(s) => s.values.iter().map(|&v| Some((s.parameter, v))).collect(),
            None => vec![None],
        };
        let mut out = Vec::new();
        for s in &series {
            for &v in &values {
                out.push(Point::new(*s, (sweep.parameter, v)));
            }
        }
        out
    }
}

fn apply(mut cfg: NetworkConfig, p: Param, v: f64) -> NetworkConfig {
    match p {
        Param::LinkDistance => cfg.link_distance = v,
        Param::Threshold => cfg.threshold = v,
        Param::ParentIntensity => cfg.cluster.parent_intensity = v,
        Param::MeanClusterSize => cfg.cluster.mean_cluster_size = v,
        Param::Intensity => {
            let c = cfg.cluster.mean_cluster_size;
            cfg.cluster.parent_intensity = if c > 0.0 { v / c } else { 0.0 };
        }
        Param::Scale => {
            cfg.cluster.scattering = match cfg.cluster.scattering {
                clusternet::Scattering::ThomasGaussian { .. } => {
                    clusternet::Scattering::ThomasGaussian { sigma: v }
                }
                clusternet::Scattering::MaternBall { .. } => {
                    clusternet::Scattering::MaternBall { radius: v }
                }
            }
        }
        Param::Alpha => cfg.pathloss.alpha = v,
        Param::Noise => cfg.noise = v,
        Param::Y | Param::Epsilon | Param::Spreading => {}
    }
    cfg
}

/// Non-network quantities at a sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub y: f64,
    pub epsilon: f64,
    pub spreading: f64,
}

/// One point of the (series, sweep) grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub series: Option<(Param, f64)>,
    pub sweep: (Param, f64),
}

impl Point {
    pub fn new(series: Option<(Param, f64)>, sweep: (Param, f64)) -> Self {
        Self { series, sweep }
    }

    fn assignments(&self) -> impl Iterator<Item = (Param, f64)> {
        self.series.into_iter().chain(std::iter::once(self.sweep))
    }

    /// `name=value` pairs joined by `;`, series first.
    pub fn label(&self) -> String {
        self.assignments()
            .map(|(p, v)| format!("{}={v}", p.name()))
            .collect::<Vec<_>>()
            .join(";")
    }
}

fn default_sweep(experiment: Experiment) -> Sweep {
    match experiment {
        Experiment::Ccdf => Sweep::grid(Param::Y, 1e-1, 1e4, 10, Spacing::Log),
        Experiment::SuccessCurve => Sweep::grid(Param::LinkDistance, 0.05, 2.0, 40, Spacing::Lin),
        Experiment::GainCurve => Sweep::grid(Param::LinkDistance, 0.0, 2.0, 41, Spacing::Lin),
        Experiment::CapacitySweep => Sweep::grid(Param::Epsilon, 1e-3, 1e-1, 9, Spacing::Log),
        Experiment::SpreadSpectrum => {
            Sweep::list(Param::Spreading, vec![1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0])
        }
        Experiment::Validate => unreachable!("validate has no sweep"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_resolves_to_defaults() {
        let cfg = ExperimentConfig::default()
            .resolve(Experiment::SuccessCurve)
            .unwrap();
        assert_eq!(cfg.network.mean_cluster_size, 5.0);
        assert_eq!(cfg.sweep.as_ref().unwrap().values().unwrap().len(), 40);
        assert!(!cfg.simulate());
        assert_eq!(
            cfg.network_config().fading,
            FadingModel::Rayleigh { rate: 1.0 }
        );
    }

    #[test]
    fn log_sweep_hits_both_ends() {
        let v = Sweep::grid(Param::Y, 1e-2, 1e2, 5, Spacing::Log)
            .values()
            .unwrap();
        assert!((v[0] - 1e-2).abs() < 1e-16 && (v[4] / 1e2 - 1.0).abs() < 1e-14);
        assert!((v[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn intensity_keeps_cluster_size() {
        let cfg = apply(
            ExperimentConfig::default().network_config(),
            Param::Intensity,
            2.0,
        );
        assert_eq!(cfg.cluster.mean_cluster_size, 5.0);
        assert!((cfg.cluster.intensity() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn mismatched_experiment_is_rejected() {
        let cfg: ExperimentConfig = toml::from_str("experiment = \"ccdf\"").unwrap();
        assert!(cfg.resolve(Experiment::GainCurve).is_err());
    }

    #[test]
    fn unknown_field_names_the_field() {
        let err = toml::from_str::<ExperimentConfig>("[network]\nalpah = 3\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("alpah") && err.contains("line 2"), "{err}");
    }
}
