//! Generating functionals of Neyman-Scott processes and the nested
//! quadrature they are evaluated with.
//!
//! Every kernel that the analytic formulas need is radial about a single
//! centre `c`, so `1 - (v * f)` is radial about `c` as well and each
//! functional collapses to one-dimensional integrals over distances.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{ClusterModel, Point, Scattering};
use crate::network::NetworkConfig;
use crate::quadrature::{
    integrate_power_tail, integrate_to_infinity, integrate_with_breaks, Estimate, Tolerance,
};

/// Tolerances and radii of the nested planar quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Truncation radius of [`integrate_plane`].
    pub outer_radius: f64,
    /// Overrides the reach of the daughter density in inner integrals.
    pub inner_radius: Option<f64>,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-6,
            abs_tol: 1e-10,
            outer_radius: 10.0,
            inner_radius: None,
            max_subdivisions: 400,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::invalid(
                "rel_tol",
                "quadrature tolerances must be positive",
            ));
        }
        if !(self.outer_radius > 0.0) {
            return Err(Error::invalid("outer_radius", "must be positive"));
        }
        if let Some(r) = self.inner_radius {
            if !(r > 0.0) {
                return Err(Error::invalid("inner_radius", "must be positive"));
            }
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions", "must be positive"));
        }
        Ok(())
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance {
            rel: self.rel_tol,
            abs: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
        }
    }

    pub fn inner_tolerance(&self) -> Tolerance {
        self.tolerance().inner()
    }

    /// Same spec with both tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            rel_tol: self.rel_tol / factor,
            abs_tol: self.abs_tol / factor,
            max_subdivisions: self.max_subdivisions * 2,
            ..*self
        }
    }

    fn reach(&self, s: &Scattering) -> f64 {
        self.inner_radius.unwrap_or_else(|| s.reach())
    }
}

const FAR_FIELD: f64 = 1e4;

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type PlaneFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Shape {
    Constant(f64),
    Radial {
        center: Point,
        deficit: RadialFn,
        breaks: Vec<f64>,
        support: Option<f64>,
        scale: f64,
        tail: Option<f64>,
    },
    General(PlaneFn),
}

/// A function `v: R^2 -> [0, 1]`, the argument of a generating functional.
#[derive(Clone)]
pub struct Kernel {
    shape: Shape,
    label: String,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("label", &self.label)
            .finish()
    }
}

impl Kernel {
    pub fn constant(v: f64) -> Self {
        Self {
            shape: Shape::Constant(v.clamp(0.0, 1.0)),
            label: format!("constant({v})"),
        }
    }

    /// `v(x) = 1 - deficit(|x - center|)`.
    ///
    /// `breaks` lists distances where the deficit is not smooth, `support`
    /// bounds its support if it is compact, and `scale` is the distance over
    /// which it decays.
    pub fn radial<F>(
        label: impl Into<String>,
        center: Point,
        deficit: F,
        breaks: Vec<f64>,
        support: Option<f64>,
        scale: f64,
    ) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            shape: Shape::Radial {
                center,
                deficit: Arc::new(deficit),
                breaks,
                support,
                scale: scale.max(1e-12),
                tail: None,
            },
            label: label.into(),
        }
    }

    /// Declares that the deficit of a radial kernel decays like `u^-exponent`.
    pub fn with_power_tail(mut self, exponent: f64) -> Self {
        if let Shape::Radial { tail, .. } = &mut self.shape {
            *tail = Some(exponent);
        }
        self
    }

    pub fn general<F>(label: impl Into<String>, v: F) -> Self
    where
        F: Fn(Point) -> f64 + Send + Sync + 'static,
    {
        Self {
            shape: Shape::General(Arc::new(v)),
            label: label.into(),
        }
    }

    /// Indicator of the complement of the open ball `B(center, r)`.
    pub fn ball_complement(center: Point, r: f64) -> Self {
        Self::radial(
            format!("ball_complement({r})"),
            center,
            move |u| if u < r { 1.0 } else { 0.0 },
            vec![r],
            Some(r),
            r,
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value(&self, x: Point) -> f64 {
        match &self.shape {
            Shape::Constant(v) => *v,
            Shape::Radial {
                center, deficit, ..
            } => 1.0 - deficit(x.dist(*center)),
            Shape::General(v) => v(x),
        }
    }

    pub fn center(&self) -> Option<Point> {
        match &self.shape {
            Shape::Radial { center, .. } => Some(*center),
            _ => None,
        }
    }
}

/// Nested polar quadrature of `f` over `B(center, radius)`.
pub fn integrate_plane_about<F>(
    f: F,
    center: Point,
    radius: f64,
    radial_breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate>
where
    F: Fn(Point) -> f64,
{
    let inner = spec.inner_tolerance();
    integrate_with_breaks(
        |r| {
            if r == 0.0 {
                return Ok(0.0);
            }
            let ring = integrate_with_breaks(
                |t| Ok(f(center + Point::polar(r, t))),
                0.0,
                2.0 * PI,
                &[PI],
                &inner,
            )?;
            Ok(r * ring.value)
        },
        0.0,
        radius,
        radial_breaks,
        &spec.tolerance(),
    )
    .map_err(|e| e.in_operation("integrate_plane"))
}

/// Integral of `f` over `B(0, R_out)`.
pub fn integrate_plane<F>(f: F, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(Point) -> f64,
{
    integrate_plane_about(f, Point::ORIGIN, spec.outer_radius, &[], spec)
}

/// Deficit `1 - (v * f)` of a radial kernel at distance `d` from its centre.
pub fn radial_conv_deficit(
    kernel: &Kernel,
    scattering: &Scattering,
    d: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    radial_conv_deficit_tol(kernel, scattering, d, spec, &spec.inner_tolerance())
}

fn radial_conv_deficit_tol(
    kernel: &Kernel,
    scattering: &Scattering,
    d: f64,
    spec: &QuadratureSpec,
    tol: &Tolerance,
) -> Result<f64> {
    let Shape::Radial {
        deficit,
        breaks,
        support,
        ..
    } = &kernel.shape
    else {
        return Err(Error::Unsupported(format!(
            "kernel `{}` is not radial",
            kernel.label
        )));
    };
    let reach = spec.reach(scattering);
    let lo = (d - reach).max(0.0);
    let mut hi = d + reach;
    if let Some(s) = support {
        hi = hi.min(*s);
    }
    if hi <= lo {
        return Ok(0.0);
    }
    if d > FAR_FIELD * reach && support.is_none() && breaks.iter().all(|&b| (b - d).abs() > reach) {
        // relative error of order (reach / d)^2
        return Ok(deficit(d).clamp(0.0, 1.0));
    }
    let mut pts = breaks.clone();
    pts.extend(scattering.ring_kinks(d));
    let est = integrate_with_breaks(
        |rho| Ok(rho * deficit(rho) * scattering.ring(rho, d)),
        lo,
        hi,
        &pts,
        tol,
    )?;
    Ok(est.value.clamp(0.0, 1.0))
}

/// `int_{R^2} F(|x - c|, W(|x - c|)) dx` for a radial kernel centred at `c`,
/// with `W = 1 - (v * f)`.
pub fn integrate_over_plane<F>(
    kernel: &Kernel,
    scattering: &Scattering,
    spec: &QuadratureSpec,
    mut integrand: F,
) -> Result<Estimate>
where
    F: FnMut(f64, f64) -> f64,
{
    let Shape::Radial {
        breaks,
        support,
        scale,
        tail,
        ..
    } = &kernel.shape
    else {
        return Err(Error::Unsupported(format!(
            "kernel `{}` is not radial",
            kernel.label
        )));
    };
    let reach = spec.reach(scattering);
    let inner = spec.inner_tolerance();
    let mut pts: Vec<f64> = Vec::new();
    for &b in breaks {
        pts.push(b);
        if matches!(scattering, Scattering::MaternBall { .. }) {
            pts.push(b + reach);
            pts.push((b - reach).max(0.0));
        }
    }
    let mut f = |r: f64| -> Result<f64> {
        let w = radial_conv_deficit_tol(kernel, scattering, r, spec, &inner)?;
        Ok(2.0 * PI * r * integrand(r, w))
    };
    match support {
        Some(s) => integrate_with_breaks(f, 0.0, s + reach, &pts, &spec.tolerance()),
        None => {
            let split = 2.0 * (scale + reach);
            match tail {
                Some(e) => {
                    integrate_power_tail(&mut f, 0.0, split, &pts, &spec.tolerance(), e - 1.0)
                }
                _ => integrate_to_infinity(&mut f, 0.0, split, &pts, &spec.tolerance()),
            }
        }
    }
}

/// `int F(W(|y - c|)) f(y) dy`, the average over the position of the parent
/// of a daughter sitting at the origin.
pub fn integrate_over_parent<F>(
    kernel: &Kernel,
    scattering: &Scattering,
    spec: &QuadratureSpec,
    mut integrand: F,
) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    let Shape::Radial { center, breaks, .. } = &kernel.shape else {
        return Err(Error::Unsupported(format!(
            "kernel `{}` is not radial",
            kernel.label
        )));
    };
    let dc = center.norm();
    let reach = spec.reach(scattering);
    let inner = spec.inner_tolerance();
    let lo = (dc - reach).max(0.0);
    let hi = dc + reach;
    let mut pts = scattering.ring_kinks(dc);
    for &b in breaks {
        pts.push(b);
        if matches!(scattering, Scattering::MaternBall { .. }) {
            pts.push(b + reach);
            pts.push((b - reach).max(0.0));
        }
    }
    integrate_with_breaks(
        |rho| {
            let w = radial_conv_deficit_tol(kernel, scattering, rho, spec, &inner)?;
            Ok(rho * integrand(w) * scattering.ring(rho, dc))
        },
        lo,
        hi,
        &pts,
        &spec.tolerance(),
    )
}

/// `(v * f)(x) = int v(x - y) f(y) dy`.
pub fn cluster_kernel_conv(
    v: &Kernel,
    model: &ClusterModel,
    x: Point,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let s = &model.scattering;
    match &v.shape {
        Shape::Constant(c) => Ok(*c),
        Shape::Radial { center, .. } => Ok(1.0
            - radial_conv_deficit(v, s, x.dist(*center), spec)
                .map_err(|e| e.in_operation("cluster_kernel_conv"))?),
        Shape::General(f) => {
            let reach = spec.reach(s);
            let est = integrate_plane_about(
                |y| f(x + y) * s.density(y.norm()),
                Point::ORIGIN,
                reach,
                &[],
                spec,
            )
            .map_err(|e| e.in_operation("cluster_kernel_conv"))?;
            Ok(est.value.clamp(0.0, 1.0))
        }
    }
}

/// Value of a generating functional with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PgflValue {
    pub value: f64,
    pub error: f64,
}

/// Conditional generating functional split into its two factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalPgfl {
    pub value: f64,
    /// `G~(v)`, the contribution of all clusters but the typical point's own.
    pub unconditional: f64,
    /// Contribution of the siblings of the typical point.
    pub representative: f64,
    /// `1 - value`, computed without cancellation.
    pub deficit: f64,
    pub error: f64,
}

/// `ln G~(v) = -lambda_p int [1 - M((v * f)(x))] dx` with its error estimate.
pub fn log_unconditional_pgfl(
    v: &Kernel,
    model: &ClusterModel,
    spec: &QuadratureSpec,
) -> Result<PgflValue> {
    if model.parent_intensity == 0.0 || model.mean_cluster_size == 0.0 {
        return Ok(PgflValue {
            value: 0.0,
            error: 0.0,
        });
    }
    match &v.shape {
        Shape::Constant(c) => {
            if *c >= 1.0 {
                Ok(PgflValue {
                    value: 0.0,
                    error: 0.0,
                })
            } else {
                Ok(PgflValue {
                    value: f64::NEG_INFINITY,
                    error: 0.0,
                })
            }
        }
        Shape::General(_) => Err(Error::Unsupported(format!(
            "generating functionals need a kernel radial about one point; `{}` is not",
            v.label
        ))),
        Shape::Radial { .. } => {
            let est = integrate_over_plane(v, &model.scattering, spec, |_, w| {
                model.count_pgf_deficit(w)
            })
            .map_err(|e| e.in_operation("unconditional_pgfl"))?;
            Ok(PgflValue {
                value: -model.parent_intensity * est.value,
                error: model.parent_intensity * est.error,
            })
        }
    }
}

/// `G~(v) = E prod_{x in phi} v(x)`.
pub fn unconditional_pgfl(
    v: &Kernel,
    model: &ClusterModel,
    spec: &QuadratureSpec,
) -> Result<PgflValue> {
    let ln = log_unconditional_pgfl(v, model, spec)?;
    let value = ln.value.exp();
    Ok(PgflValue {
        value,
        error: value * ln.error,
    })
}

/// Factor of the reduced Palm functional due to the siblings of the
/// typical point.
pub fn representative_factor(
    v: &Kernel,
    model: &ClusterModel,
    spec: &QuadratureSpec,
) -> Result<PgflValue> {
    let d = representative_deficit(v, model, spec)?;
    Ok(PgflValue {
        value: (1.0 - d.value).clamp(0.0, 1.0),
        error: d.error,
    })
}

/// `1 -` [`representative_factor`], computed without cancellation.
pub fn representative_deficit(
    v: &Kernel,
    model: &ClusterModel,
    spec: &QuadratureSpec,
) -> Result<PgflValue> {
    if model.mean_cluster_size == 0.0 {
        return Ok(PgflValue {
            value: 0.0,
            error: 0.0,
        });
    }
    match &v.shape {
        Shape::Constant(c) => Ok(PgflValue {
            value: model.sibling_pgf_deficit(1.0 - *c),
            error: 0.0,
        }),
        Shape::General(_) => Err(Error::Unsupported(format!(
            "generating functionals need a kernel radial about one point; `{}` is not",
            v.label
        ))),
        Shape::Radial { .. } => {
            let est =
                integrate_over_parent(v, &model.scattering, spec, |w| model.sibling_pgf_deficit(w))
                    .map_err(|e| e.in_operation("conditional_pgfl"))?;
            Ok(PgflValue {
                value: est.value.clamp(0.0, 1.0),
                error: est.error,
            })
        }
    }
}

/// `G(v) = E^!_0 prod_{x in phi} v(x)`, the functional under the reduced
/// Palm distribution.
pub fn conditional_pgfl(
    v: &Kernel,
    model: &ClusterModel,
    spec: &QuadratureSpec,
) -> Result<ConditionalPgfl> {
    let ln = log_unconditional_pgfl(v, model, spec)?;
    let r = representative_deficit(v, model, spec)?;
    let u = ln.value.exp();
    let rep = 1.0 - r.value;
    Ok(ConditionalPgfl {
        value: u * rep,
        unconditional: u,
        representative: rep,
        deficit: (-ln.value.exp_m1() + u * r.value).clamp(0.0, 1.0),
        error: u * ln.error * rep + r.error * u,
    })
}

/// Kernel `x -> L_h(s g(x - z))`.
pub fn laplace_kernel(cfg: &NetworkConfig, s: f64) -> Result<Kernel> {
    cfg.fading.laplace(0.0)?;
    let fading = cfg.fading;
    let pl = cfg.pathloss;
    let scale = if s > 0.0 { s.powf(1.0 / pl.alpha) } else { 1.0 };
    let breaks = match pl.kind {
        crate::channel::PathLossKind::ClippedSingular => vec![1.0],
        _ => vec![],
    };
    Ok(Kernel::radial(
        format!("laplace(s={s})"),
        cfg.receiver(),
        move |u| {
            if s == 0.0 {
                0.0
            } else {
                fading.laplace_deficit(s * pl.radial(u)).unwrap_or(1.0)
            }
        },
        breaks,
        if s == 0.0 { Some(0.0) } else { None },
        scale,
    )
    .with_power_tail(pl.alpha))
}

/// Laplace transform of the interference at the receiver under the reduced
/// Palm distribution, `E^!_0 exp(-s I(z))`.
pub fn conditional_laplace_interference(
    cfg: &NetworkConfig,
    s: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::invalid("s", "Laplace argument must be non-negative"));
    }
    let k = laplace_kernel(cfg, s)?;
    conditional_pgfl(&k, &cfg.cluster, spec)
        .map(|g| g.value)
        .map_err(|e| e.in_operation("conditional_laplace_interference"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{FadingModel, PathLoss};
    use approx::assert_relative_eq;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn plane_integrals() {
        let s = QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            ..spec()
        };
        let thomas = Scattering::ThomasGaussian { sigma: 0.25 };
        let v = integrate_plane(|x| thomas.density(x.norm()), &s).unwrap();
        assert_relative_eq!(v.value, 1.0, epsilon = 1e-9);
        let g1 = Scattering::ThomasGaussian { sigma: 1.0 };
        let m2 = integrate_plane(|x| g1.density(x.norm()) * x.norm_sq(), &s).unwrap();
        assert_relative_eq!(m2.value, 2.0, epsilon = 1e-6);
        let disc = integrate_plane(|x| if x.norm() <= 1.0 { 1.0 } else { 0.0 }, &spec()).unwrap();
        assert_relative_eq!(disc.value, PI, epsilon = 1e-6);
    }

    #[test]
    fn plane_integral_reports_non_convergence() {
        let s = QuadratureSpec {
            rel_tol: 1e-14,
            abs_tol: 1e-300,
            max_subdivisions: 2,
            ..spec()
        };
        let err = integrate_plane(|x| if x.x > 0.3 { 1.0 } else { 0.0 }, &s).unwrap_err();
        assert!(matches!(
            err,
            Error::NonConvergence {
                operation: "integrate_plane",
                ..
            }
        ));
    }

    #[test]
    fn kernel_convolution_examples() {
        let m = ClusterModel::thomas(1.0, 2.0, 0.3);
        let x = Point::new(0.2, -0.1);
        assert_eq!(
            cluster_kernel_conv(&Kernel::constant(1.0), &m, x, &spec()).unwrap(),
            1.0
        );
        assert_eq!(
            cluster_kernel_conv(&Kernel::constant(0.0), &m, x, &spec()).unwrap(),
            0.0
        );
        let half = Kernel::general("half-plane", |p| if p.x > 0.0 { 1.0 } else { 0.0 });
        assert_relative_eq!(
            cluster_kernel_conv(&half, &m, Point::ORIGIN, &spec()).unwrap(),
            0.5,
            epsilon = 1e-6
        );
        // radial route agrees with the general one
        for scattering in [
            Scattering::ThomasGaussian { sigma: 0.3 },
            Scattering::MaternBall { radius: 0.5 },
        ] {
            let model = ClusterModel { scattering, ..m };
            let c = Point::new(0.4, 0.1);
            let radial = Kernel::radial("r", c, |u| 1.0 / (1.0 + 4.0 * u * u), vec![], None, 0.5);
            let general = Kernel::general("g", move |p| 1.0 - 1.0 / (1.0 + 4.0 * p.dist_sq(c)));
            let a = cluster_kernel_conv(&radial, &model, x, &spec()).unwrap();
            let b = cluster_kernel_conv(&general, &model, x, &spec()).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-6);
        }
    }

    #[test]
    fn trivial_functionals() {
        let m = ClusterModel::matern(2.0, 3.0, 0.5);
        let one = Kernel::constant(1.0);
        assert_eq!(unconditional_pgfl(&one, &m, &spec()).unwrap().value, 1.0);
        assert_eq!(conditional_pgfl(&one, &m, &spec()).unwrap().value, 1.0);
        let none = ClusterModel::matern(0.0, 3.0, 0.5);
        let k = Kernel::ball_complement(Point::ORIGIN, 1.0);
        assert_eq!(unconditional_pgfl(&k, &none, &spec()).unwrap().value, 1.0);
        assert!(unconditional_pgfl(&Kernel::general("g", |_| 0.5), &m, &spec()).is_err());
    }

    #[test]
    fn poisson_limit_of_conditional_functional() {
        // lambda_p c fixed at 1 with c -> 0 gives exp(-int (1 - v)) for the PPP
        let c = 1e-3;
        let model = ClusterModel::thomas(1.0 / c, c, 0.25);
        let cfg = NetworkConfig::new(
            model,
            PathLoss::singular(4.0),
            FadingModel::rayleigh(1.0),
            1.0,
            0.5,
        );
        let s = 1.0 / cfg.link_gain();
        let k = laplace_kernel(&cfg, s).unwrap();
        let g = conditional_pgfl(&k, &model, &spec()).unwrap().value;
        let ppp = (-crate::special::pathloss_constant(4.0) * 0.25).exp();
        assert_relative_eq!(g, ppp, max_relative = 1e-3);
    }

    #[test]
    fn laplace_at_zero_and_empty() {
        let model = ClusterModel::thomas(1.0, 2.0, 0.25);
        let cfg = NetworkConfig::new(
            model,
            PathLoss::bounded(4.0),
            FadingModel::rayleigh(1.0),
            1.0,
            0.5,
        );
        assert_eq!(
            conditional_laplace_interference(&cfg, 0.0, &spec()).unwrap(),
            1.0
        );
        let empty = cfg
            .with_intensities(0.0, 2.0)
            .with_cluster(ClusterModel::thomas(0.0, 0.0, 0.25));
        assert_eq!(
            conditional_laplace_interference(&empty, 3.0, &spec()).unwrap(),
            1.0
        );
        let pareto = cfg.with_fading(FadingModel::GeneralizedPareto {
            k: 1.0,
            sigma: 1.0,
            theta: 0.0,
        });
        assert!(matches!(
            conditional_laplace_interference(&pareto, 1.0, &spec()),
            Err(Error::UnsupportedFading(_))
        ));
    }
}
