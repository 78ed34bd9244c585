//! Planar points, Poisson and Neyman-Scott samplers, and the cluster
//! densities used by the analytic formulas.

use std::f64::consts::PI;
use std::io::{self, Write};
use std::ops::{Add, Neg, Sub};

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_with_breaks, Tolerance};
use crate::rng::{Streams, DOMAIN_PATTERN};
use crate::special::bessel_i0e;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn polar(r: f64, theta: f64) -> Self {
        Self::new(r * theta.cos(), r * theta.sin())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dist_sq(self, other: Point) -> f64 {
        (self - other).norm_sq()
    }

    pub fn rotate(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Disc on which a sampled pattern is complete.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    center: Point,
    radius: f64,
}

impl Window {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid(
                "radius",
                "window radius must be positive and finite",
            ));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn contains(&self, p: Point) -> bool {
        p.dist_sq(self.center) <= self.radius * self.radius
    }

    pub fn dilate(&self, by: f64) -> Window {
        Window {
            center: self.center,
            radius: self.radius + by.max(0.0),
        }
    }

    /// Uniform point in the disc.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let r = self.radius * rng.random::<f64>().sqrt();
        let theta = 2.0 * PI * rng.random::<f64>();
        self.center + Point::polar(r, theta)
    }
}

/// Daughter displacement law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scattering {
    /// Uniform in a disc of the given radius.
    MaternBall { radius: f64 },
    /// Isotropic Gaussian with the given per-coordinate standard deviation.
    ThomasGaussian { sigma: f64 },
}

/// Law of the number of daughters per parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountLaw {
    PoissonCount,
    FixedCount(u32),
}

/// Gaussian mass beyond this many standard deviations is ignored by the
/// quadrature routines.
pub const GAUSSIAN_QUADRATURE_REACH: f64 = 9.0;
/// Gaussian mass beyond this many standard deviations is ignored when
/// choosing where parents are sampled.
pub const GAUSSIAN_SAMPLER_REACH: f64 = 6.0;

impl Scattering {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Scattering::MaternBall { radius } if !(radius > 0.0 && radius.is_finite()) => {
                Err(Error::invalid("radius", "Matern radius must be positive"))
            }
            Scattering::ThomasGaussian { sigma } if !(sigma > 0.0 && sigma.is_finite()) => Err(
                Error::invalid("sigma", "Thomas standard deviation must be positive"),
            ),
            _ => Ok(()),
        }
    }

    /// Radius beyond which the density is treated as zero by quadrature.
    pub fn reach(&self) -> f64 {
        match *self {
            Scattering::MaternBall { radius } => radius,
            Scattering::ThomasGaussian { sigma } => GAUSSIAN_QUADRATURE_REACH * sigma,
        }
    }

    /// Dilation used by the samplers.
    pub fn sampler_reach(&self) -> f64 {
        match *self {
            Scattering::MaternBall { radius } => radius,
            Scattering::ThomasGaussian { sigma } => GAUSSIAN_SAMPLER_REACH * sigma,
        }
    }

    /// Radius beyond which `f * f` is treated as zero.
    pub fn selfconv_reach(&self) -> f64 {
        match *self {
            Scattering::MaternBall { radius } => 2.0 * radius,
            Scattering::ThomasGaussian { sigma } => {
                GAUSSIAN_QUADRATURE_REACH * std::f64::consts::SQRT_2 * sigma
            }
        }
    }

    /// f(x) as a function of |x|.
    pub fn density(&self, r: f64) -> f64 {
        match *self {
            Scattering::MaternBall { radius } => {
                if r <= radius {
                    1.0 / (PI * radius * radius)
                } else {
                    0.0
                }
            }
            Scattering::ThomasGaussian { sigma } => {
                let v = sigma * sigma;
                (-r * r / (2.0 * v)).exp() / (2.0 * PI * v)
            }
        }
    }

    /// (f * f)(x) as a function of |x|.
    pub fn selfconv(&self, r: f64) -> f64 {
        match *self {
            Scattering::MaternBall { radius: a } => {
                if r >= 2.0 * a {
                    return 0.0;
                }
                let lens =
                    2.0 * a * a * (r / (2.0 * a)).acos() - 0.5 * r * (4.0 * a * a - r * r).sqrt();
                let area = PI * a * a;
                lens / (area * area)
            }
            Scattering::ThomasGaussian { sigma } => {
                let v = 2.0 * sigma * sigma;
                (-r * r / (2.0 * v)).exp() / (2.0 * PI * v)
            }
        }
    }

    /// sup of f * f, attained at the origin.
    pub fn selfconv_max(&self) -> f64 {
        self.selfconv(0.0)
    }

    /// Integral of f over the circle of radius `rho` centred at distance `d`
    /// from the origin, with respect to the angle.
    ///
    /// For a radial h and |c| = d, `int h(|x|) f(x - c) dx = int rho h(rho) ring(rho, d) drho`.
    pub fn ring(&self, rho: f64, d: f64) -> f64 {
        match *self {
            Scattering::MaternBall { radius: a } => matern_arc(rho, d, a) / (PI * a * a),
            Scattering::ThomasGaussian { sigma } => gaussian_ring(rho, d, sigma * sigma),
        }
    }

    /// Same as [`Scattering::ring`] for the self-convolution `f * f`.
    pub fn selfconv_ring(&self, rho: f64, d: f64, tol: &Tolerance) -> Result<f64> {
        match *self {
            Scattering::ThomasGaussian { sigma } => Ok(gaussian_ring(rho, d, 2.0 * sigma * sigma)),
            Scattering::MaternBall { radius: a } => {
                if rho == 0.0 || d == 0.0 {
                    return Ok(2.0 * PI * self.selfconv(rho + d));
                }
                if (rho - d).abs() >= 2.0 * a {
                    return Ok(0.0);
                }
                let dist = |theta: f64| {
                    (rho * rho + d * d - 2.0 * rho * d * theta.cos())
                        .max(0.0)
                        .sqrt()
                };
                let c = (rho * rho + d * d - 4.0 * a * a) / (2.0 * rho * d);
                let end = if c <= -1.0 { PI } else { c.min(1.0).acos() };
                let est = integrate_with_breaks(|t| Ok(self.selfconv(dist(t))), 0.0, end, &[], tol)
                    .map_err(|e| e.in_operation("selfconv_ring"))?;
                Ok(2.0 * est.value)
            }
        }
    }

    /// Points where `ring(rho, d)` is not smooth as a function of `rho`.
    pub fn ring_kinks(&self, d: f64) -> Vec<f64> {
        match *self {
            Scattering::MaternBall { radius: a } => vec![(d - a).abs(), d + a],
            Scattering::ThomasGaussian { .. } => vec![d],
        }
    }

    /// Interval of `rho` outside which `ring(rho, d)` vanishes (up to the reach).
    pub fn ring_support(&self, d: f64) -> (f64, f64) {
        let r = self.reach();
        ((d - r).max(0.0), d + r)
    }

    pub fn sample_displacement<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match *self {
            Scattering::MaternBall { radius } => {
                let r = radius * rng.random::<f64>().sqrt();
                Point::polar(r, 2.0 * PI * rng.random::<f64>())
            }
            Scattering::ThomasGaussian { sigma } => {
                let x: f64 = rng.sample(StandardNormal);
                let y: f64 = rng.sample(StandardNormal);
                Point::new(sigma * x, sigma * y)
            }
        }
    }
}

fn matern_arc(rho: f64, d: f64, a: f64) -> f64 {
    if a >= rho + d {
        2.0 * PI
    } else if a <= (rho - d).abs() {
        0.0
    } else {
        let c = (rho * rho + d * d - a * a) / (2.0 * rho * d);
        2.0 * c.clamp(-1.0, 1.0).acos()
    }
}

fn gaussian_ring(rho: f64, d: f64, v: f64) -> f64 {
    let diff = rho - d;
    (-diff * diff / (2.0 * v)).exp() * bessel_i0e(rho * d / v) / v
}

/// Neyman-Scott process: Poisson parents, i.i.d. daughter clusters, parents
/// themselves excluded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterModel {
    pub parent_intensity: f64,
    pub mean_cluster_size: f64,
    pub scattering: Scattering,
    pub count_law: CountLaw,
}

impl ClusterModel {
    pub fn thomas(parent_intensity: f64, mean_cluster_size: f64, sigma: f64) -> Self {
        Self {
            parent_intensity,
            mean_cluster_size,
            scattering: Scattering::ThomasGaussian { sigma },
            count_law: CountLaw::PoissonCount,
        }
    }

    pub fn matern(parent_intensity: f64, mean_cluster_size: f64, radius: f64) -> Self {
        Self {
            parent_intensity,
            mean_cluster_size,
            scattering: Scattering::MaternBall { radius },
            count_law: CountLaw::PoissonCount,
        }
    }

    /// Switches to exactly `n` daughters per parent (and `c = n`).
    pub fn with_fixed_count(mut self, n: u32) -> Self {
        self.count_law = CountLaw::FixedCount(n);
        self.mean_cluster_size = n as f64;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.parent_intensity >= 0.0 && self.parent_intensity.is_finite()) {
            return Err(Error::invalid(
                "parent_intensity",
                "must be finite and non-negative",
            ));
        }
        if !(self.mean_cluster_size >= 0.0 && self.mean_cluster_size.is_finite()) {
            return Err(Error::invalid(
                "mean_cluster_size",
                "must be finite and non-negative",
            ));
        }
        if let CountLaw::FixedCount(n) = self.count_law {
            if n == 0 {
                return Err(Error::invalid(
                    "count_law",
                    "fixed cluster size must be at least 1",
                ));
            }
            if self.mean_cluster_size != n as f64 {
                return Err(Error::invalid(
                    "mean_cluster_size",
                    "must equal the fixed cluster size",
                ));
            }
        }
        self.scattering.validate()
    }

    /// Total intensity `lambda_p * c`.
    pub fn intensity(&self) -> f64 {
        self.parent_intensity * self.mean_cluster_size
    }

    /// E[N(N-1)] for the cluster size N.
    pub fn factorial_moment2(&self) -> f64 {
        match self.count_law {
            CountLaw::PoissonCount => self.mean_cluster_size * self.mean_cluster_size,
            CountLaw::FixedCount(n) => n as f64 * (n as f64 - 1.0),
        }
    }

    /// Probability generating function of the cluster size.
    pub fn count_pgf(&self, t: f64) -> f64 {
        match self.count_law {
            CountLaw::PoissonCount => (-self.mean_cluster_size * (1.0 - t)).exp(),
            CountLaw::FixedCount(n) => t.powi(n as i32),
        }
    }

    /// `1 - M(1 - w)`, accurate for small `w`.
    pub fn count_pgf_deficit(&self, w: f64) -> f64 {
        match self.count_law {
            CountLaw::PoissonCount => -(-self.mean_cluster_size * w).exp_m1(),
            CountLaw::FixedCount(n) => -(n as f64 * (-w).ln_1p()).exp_m1(),
        }
    }

    /// Generating function of the number of siblings of a typical daughter,
    /// `M'(t) / M'(1)`.
    pub fn sibling_pgf(&self, t: f64) -> f64 {
        match self.count_law {
            CountLaw::PoissonCount => (-self.mean_cluster_size * (1.0 - t)).exp(),
            CountLaw::FixedCount(n) => t.powi(n as i32 - 1),
        }
    }

    /// `1 - M'(1 - w) / M'(1)`, accurate for small `w`.
    pub fn sibling_pgf_deficit(&self, w: f64) -> f64 {
        match self.count_law {
            CountLaw::PoissonCount => -(-self.mean_cluster_size * w).exp_m1(),
            CountLaw::FixedCount(n) => -((n as f64 - 1.0) * (-w).ln_1p()).exp_m1(),
        }
    }

    fn sample_count<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self.count_law {
            CountLaw::PoissonCount => poisson(rng, self.mean_cluster_size),
            CountLaw::FixedCount(n) => n as u64,
        }
    }

    fn sample_sibling_count<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match self.count_law {
            CountLaw::PoissonCount => poisson(rng, self.mean_cluster_size),
            CountLaw::FixedCount(n) => n as u64 - 1,
        }
    }

    /// Visits the daughters of one realization that fall inside `window`.
    /// Returns the number of daughters generated by each parent, including
    /// those cropped away.
    pub fn visit_ordinary<R, F>(&self, window: &Window, rng: &mut R, mut visit: F) -> usize
    where
        R: Rng + ?Sized,
        F: FnMut(Point, &mut R),
    {
        if self.parent_intensity <= 0.0 || self.mean_cluster_size <= 0.0 {
            return 0;
        }
        let parents_window = window.dilate(self.scattering.sampler_reach());
        let parents = poisson(rng, self.parent_intensity * parents_window.area());
        for _ in 0..parents {
            let parent = parents_window.sample_uniform(rng);
            let n = self.sample_count(rng);
            for _ in 0..n {
                let p = parent + self.scattering.sample_displacement(rng);
                if window.contains(p) {
                    visit(p, rng);
                }
            }
        }
        parents as usize
    }

    /// Visits the siblings of a daughter placed at the origin (the origin
    /// itself excluded) that fall inside `window`.
    pub fn visit_representative<R, F>(&self, window: &Window, rng: &mut R, mut visit: F)
    where
        R: Rng + ?Sized,
        F: FnMut(Point, &mut R),
    {
        if self.mean_cluster_size <= 0.0 {
            return;
        }
        let parent = -self.scattering.sample_displacement(rng);
        let n = self.sample_sibling_count(rng);
        for _ in 0..n {
            let p = parent + self.scattering.sample_displacement(rng);
            if window.contains(p) {
                visit(p, rng);
            }
        }
    }
}

fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    match Poisson::new(mean) {
        Ok(d) => d.sample(rng) as u64,
        Err(_) => 0,
    }
}

/// Finite point set together with the window on which it is complete.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern {
    pub points: Vec<Point>,
    pub window: Window,
    /// True for reduced Palm samples; the conditioning point at the origin
    /// is never part of `points`.
    pub origin_conditioned: bool,
}

impl PointPattern {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn count_within(&self, center: Point, r: f64) -> usize {
        self.points
            .iter()
            .filter(|p| p.dist_sq(center) <= r * r)
            .count()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,y")?;
        for p in &self.points {
            writeln!(out, "{:.16e},{:.16e}", p.x, p.y)?;
        }
        Ok(())
    }
}

pub fn daughter_density(model: &ClusterModel, x: Point) -> f64 {
    model.scattering.density(x.norm())
}

pub fn daughter_density_selfconv(model: &ClusterModel, z: Point) -> f64 {
    model.scattering.selfconv(z.norm())
}

/// Second-order product density of the stationary process at lag `x`.
pub fn second_order_density(model: &ClusterModel, x: Point) -> f64 {
    let lambda = model.intensity();
    if lambda <= 0.0 {
        return 0.0;
    }
    lambda * lambda
        + lambda * model.factorial_moment2() / model.mean_cluster_size
            * model.scattering.selfconv(x.norm())
}

pub fn sample_ppp_with<R: Rng + ?Sized>(
    intensity: f64,
    window: &Window,
    rng: &mut R,
) -> PointPattern {
    let n = poisson(rng, intensity * window.area());
    let points = (0..n).map(|_| window.sample_uniform(rng)).collect();
    PointPattern {
        points,
        window: *window,
        origin_conditioned: false,
    }
}

pub fn sample_cluster_with<R: Rng + ?Sized>(
    model: &ClusterModel,
    window: &Window,
    rng: &mut R,
) -> PointPattern {
    let mut points = Vec::new();
    model.visit_ordinary(window, rng, |p, _| points.push(p));
    PointPattern {
        points,
        window: *window,
        origin_conditioned: false,
    }
}

pub fn sample_palm_cluster_with<R: Rng + ?Sized>(
    model: &ClusterModel,
    window: &Window,
    rng: &mut R,
) -> PointPattern {
    let mut points = Vec::new();
    model.visit_ordinary(window, rng, |p, _| points.push(p));
    model.visit_representative(window, rng, |p, _| points.push(p));
    PointPattern {
        points,
        window: *window,
        origin_conditioned: true,
    }
}

/// Homogeneous Poisson pattern on `window`.
pub fn sample_ppp(intensity: f64, window: &Window, seed: u64) -> PointPattern {
    sample_ppp_with(
        intensity,
        window,
        &mut Streams::new(seed).stream(DOMAIN_PATTERN, 0),
    )
}

/// Neyman-Scott pattern on `window`.
pub fn sample_cluster(model: &ClusterModel, window: &Window, seed: u64) -> PointPattern {
    sample_cluster_with(
        model,
        window,
        &mut Streams::new(seed).stream(DOMAIN_PATTERN, 0),
    )
}

/// Reduced Palm pattern: the process seen from a typical point at the origin.
pub fn sample_palm_cluster(model: &ClusterModel, window: &Window, seed: u64) -> PointPattern {
    sample_palm_cluster_with(
        model,
        window,
        &mut Streams::new(seed).stream(DOMAIN_PATTERN, 0),
    )
}

/// Cluster pattern together with the number of daughters of every parent
/// (before cropping to the window).
pub fn sample_cluster_audited(
    model: &ClusterModel,
    window: &Window,
    seed: u64,
) -> (PointPattern, Vec<usize>) {
    let rng = &mut Streams::new(seed).stream(DOMAIN_PATTERN, 0);
    let mut points = Vec::new();
    let mut sizes = Vec::new();
    if model.parent_intensity > 0.0 && model.mean_cluster_size > 0.0 {
        let parents_window = window.dilate(model.scattering.sampler_reach());
        let parents = poisson(rng, model.parent_intensity * parents_window.area());
        for _ in 0..parents {
            let parent = parents_window.sample_uniform(rng);
            let n = model.sample_count(rng);
            sizes.push(n as usize);
            for _ in 0..n {
                let p = parent + model.scattering.sample_displacement(rng);
                if window.contains(p) {
                    points.push(p);
                }
            }
        }
    }
    let pattern = PointPattern {
        points,
        window: *window,
        origin_conditioned: false,
    };
    (pattern, sizes)
}
