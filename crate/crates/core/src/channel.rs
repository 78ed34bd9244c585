//! Path-loss laws and power-fading distributions.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma as GammaDist};
use statrs::function::gamma::{gamma, gamma_lr, ln_gamma};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::quadrature::{integrate_power_tail, integrate_to_infinity, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathLossKind {
    /// `|x|^-alpha`
    Singular,
    /// `1 / (1 + |x|^alpha)`
    Bounded,
    /// `min(1, |x|^-alpha)`
    ClippedSingular,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLoss {
    pub kind: PathLossKind,
    pub alpha: f64,
}

impl PathLoss {
    pub fn new(kind: PathLossKind, alpha: f64) -> Result<Self> {
        let pl = Self { kind, alpha };
        pl.validate()?;
        Ok(pl)
    }

    pub fn singular(alpha: f64) -> Self {
        Self {
            kind: PathLossKind::Singular,
            alpha,
        }
    }

    pub fn bounded(alpha: f64) -> Self {
        Self {
            kind: PathLossKind::Bounded,
            alpha,
        }
    }

    pub fn clipped(alpha: f64) -> Self {
        Self {
            kind: PathLossKind::ClippedSingular,
            alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 2.0 && self.alpha.is_finite()) {
            return Err(Error::invalid("alpha", "path-loss exponent must exceed 2"));
        }
        Ok(())
    }

    /// `g` as a function of distance. The singular law returns `+inf` at 0.
    #[inline]
    pub fn radial(&self, r: f64) -> f64 {
        self.radial_sq(r * r)
    }

    /// `g` as a function of squared distance.
    #[inline]
    pub fn radial_sq(&self, r2: f64) -> f64 {
        let half = 0.5 * self.alpha;
        let p = if half == half.trunc() && half <= 8.0 {
            r2.powi(half as i32)
        } else {
            r2.powf(half)
        };
        match self.kind {
            PathLossKind::Singular => 1.0 / p,
            PathLossKind::Bounded => 1.0 / (1.0 + p),
            PathLossKind::ClippedSingular => (1.0 / p).min(1.0),
        }
    }

    pub fn eval(&self, x: Point) -> Result<f64> {
        if self.kind == PathLossKind::Singular && x.norm_sq() == 0.0 {
            return Err(Error::SingularAtOrigin);
        }
        Ok(self.radial_sq(x.norm_sq()))
    }

    pub fn is_singular(&self) -> bool {
        self.kind == PathLossKind::Singular
    }

    /// Distance at which `g` equals `v`; 0 when `g` never drops to `v`
    /// from above.
    pub fn inverse_radial(&self, v: f64) -> f64 {
        let a = self.alpha;
        match self.kind {
            PathLossKind::Singular => v.powf(-1.0 / a),
            PathLossKind::Bounded => {
                if v >= 1.0 {
                    0.0
                } else {
                    (1.0 / v - 1.0).powf(1.0 / a)
                }
            }
            PathLossKind::ClippedSingular => {
                if v >= 1.0 {
                    0.0
                } else {
                    v.powf(-1.0 / a)
                }
            }
        }
    }

    /// `int_{|x| > r} g(x) dx`.
    pub fn tail_integral(&self, r: f64) -> Result<f64> {
        let a = self.alpha;
        let power_tail = |r: f64| 2.0 * PI * r.powf(2.0 - a) / (a - 2.0);
        match self.kind {
            PathLossKind::Singular => {
                if r <= 0.0 {
                    Ok(f64::INFINITY)
                } else {
                    Ok(power_tail(r))
                }
            }
            PathLossKind::ClippedSingular => {
                if r >= 1.0 {
                    Ok(power_tail(r))
                } else {
                    Ok(PI * (1.0 - r.max(0.0).powi(2)) + power_tail(1.0))
                }
            }
            PathLossKind::Bounded => {
                let tol = Tolerance::new(1e-10, 1e-300);
                let r = r.max(0.0);
                let est = integrate_power_tail(
                    |u| Ok(2.0 * PI * u * self.radial(u)),
                    r,
                    r.max(1.0),
                    &[],
                    &tol,
                    self.alpha - 1.0,
                )
                .map_err(|e| e.in_operation("pathloss_tail"))?;
                Ok(est.value)
            }
        }
    }

    /// Smallest radius whose tail integral does not exceed `target`.
    pub fn tail_radius(&self, target: f64) -> Result<f64> {
        if !(target > 0.0) {
            return Err(Error::invalid("target", "tail target must be positive"));
        }
        let a = self.alpha;
        let power_radius = (2.0 * PI / ((a - 2.0) * target)).powf(1.0 / (a - 2.0));
        match self.kind {
            PathLossKind::Singular => Ok(power_radius),
            PathLossKind::ClippedSingular => {
                if power_radius >= 1.0 {
                    Ok(power_radius)
                } else {
                    let inner = target - power_tail_one(a);
                    if inner >= PI {
                        Ok(0.0)
                    } else {
                        Ok((1.0 - inner / PI).max(0.0).sqrt())
                    }
                }
            }
            PathLossKind::Bounded => {
                // the bounded tail lies below the singular one
                let mut hi = power_radius.max(1e-9);
                if self.tail_integral(0.0)? <= target {
                    return Ok(0.0);
                }
                let mut lo = 0.0;
                while self.tail_integral(hi)? > target {
                    lo = hi;
                    hi *= 2.0;
                }
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    if self.tail_integral(mid)? > target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= 1e-12 * hi {
                        break;
                    }
                }
                Ok(hi)
            }
        }
    }
}

fn power_tail_one(a: f64) -> f64 {
    2.0 * PI / (a - 2.0)
}

/// Distribution of the received power fading coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingModel {
    /// Exponential power with rate `rate`, so that `L(s) = rate / (rate + s)`.
    Rayleigh { rate: f64 },
    /// Gamma power with integer shape `m` and mean `omega`.
    Nakagami { m: u32, omega: f64 },
    /// Generalized Pareto with shape `k`, scale `sigma` and location `theta`.
    GeneralizedPareto { k: f64, sigma: f64, theta: f64 },
}

impl FadingModel {
    pub fn rayleigh(rate: f64) -> Self {
        FadingModel::Rayleigh { rate }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FadingModel::Rayleigh { rate } if !(rate > 0.0 && rate.is_finite()) => {
                Err(Error::invalid("rate", "Rayleigh rate must be positive"))
            }
            FadingModel::Nakagami { m, omega } => {
                if m == 0 {
                    Err(Error::invalid(
                        "m",
                        "Nakagami shape must be a positive integer",
                    ))
                } else if !(omega > 0.0 && omega.is_finite()) {
                    Err(Error::invalid("omega", "Nakagami mean must be positive"))
                } else {
                    Ok(())
                }
            }
            FadingModel::GeneralizedPareto { k, sigma, theta } => {
                if !(k >= 0.0 && k.is_finite()) {
                    Err(Error::invalid(
                        "k",
                        "generalized Pareto shape must be non-negative",
                    ))
                } else if !(sigma > 0.0 && sigma.is_finite()) {
                    Err(Error::invalid(
                        "sigma_p",
                        "generalized Pareto scale must be positive",
                    ))
                } else if !(theta >= 0.0 && theta.is_finite()) {
                    Err(Error::invalid(
                        "theta",
                        "generalized Pareto location must be non-negative",
                    ))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FadingModel::Rayleigh { .. } => "rayleigh",
            FadingModel::Nakagami { .. } => "nakagami",
            FadingModel::GeneralizedPareto { .. } => "generalized-pareto",
        }
    }

    pub fn cdf(&self, y: f64) -> f64 {
        if !(y > 0.0) {
            return 0.0;
        }
        match *self {
            FadingModel::Rayleigh { rate } => -(-rate * y).exp_m1(),
            FadingModel::Nakagami { m, omega } => gamma_lr(m as f64, m as f64 * y / omega),
            FadingModel::GeneralizedPareto { .. } => 1.0 - self.ccdf(y),
        }
    }

    /// `P(h > y)`, accurate in the tail.
    pub fn ccdf(&self, y: f64) -> f64 {
        if !(y > 0.0) {
            return 1.0;
        }
        match *self {
            FadingModel::Rayleigh { rate } => (-rate * y).exp(),
            FadingModel::Nakagami { m, omega } => {
                let x = m as f64 * y / omega;
                // finite Poisson sum for integer shape
                let mut term = 1.0;
                let mut sum = 1.0;
                for j in 1..m {
                    term *= x / j as f64;
                    sum += term;
                }
                (-x).exp() * sum
            }
            FadingModel::GeneralizedPareto { k, sigma, theta } => {
                if y <= theta {
                    1.0
                } else if k == 0.0 {
                    (-(y - theta) / sigma).exp()
                } else {
                    (1.0 + k * (y - theta) / sigma).powf(-1.0 / k)
                }
            }
        }
    }

    pub fn laplace(&self, s: f64) -> Result<f64> {
        match *self {
            FadingModel::Rayleigh { rate } => Ok(rate / (rate + s)),
            FadingModel::Nakagami { m, omega } => {
                Ok((1.0 + omega * s / m as f64).powi(-(m as i32)))
            }
            FadingModel::GeneralizedPareto { .. } => {
                Err(Error::UnsupportedFading("generalized Pareto"))
            }
        }
    }

    /// `1 - L(s)`, accurate for small `s`.
    pub fn laplace_deficit(&self, s: f64) -> Result<f64> {
        if s == f64::INFINITY {
            return Ok(1.0);
        }
        match *self {
            FadingModel::Rayleigh { rate } => Ok(s / (rate + s)),
            FadingModel::Nakagami { m, omega } => {
                let m = m as f64;
                Ok(-(-m * (omega * s / m).ln_1p()).exp_m1())
            }
            FadingModel::GeneralizedPareto { .. } => {
                Err(Error::UnsupportedFading("generalized Pareto"))
            }
        }
    }

    pub fn mean(&self) -> Result<f64> {
        self.fractional_moment(1.0)
    }

    /// `E[h^p]`. Negative orders are allowed where the moment exists.
    pub fn fractional_moment(&self, p: f64) -> Result<f64> {
        if p == 0.0 {
            return Ok(1.0);
        }
        match *self {
            FadingModel::Rayleigh { rate } => {
                if p <= -1.0 {
                    return Err(Error::DivergentMoment {
                        order: p,
                        model: "Rayleigh",
                    });
                }
                Ok(rate.powf(-p) * gamma(1.0 + p))
            }
            FadingModel::Nakagami { m, omega } => {
                let m = m as f64;
                if m + p <= 0.0 {
                    return Err(Error::DivergentMoment {
                        order: p,
                        model: "Nakagami",
                    });
                }
                Ok((omega / m).powf(p) * (ln_gamma(m + p) - ln_gamma(m)).exp())
            }
            FadingModel::GeneralizedPareto { k, sigma, theta } => {
                if (k > 0.0 && p * k >= 1.0) || (theta == 0.0 && p <= -1.0) {
                    return Err(Error::DivergentMoment {
                        order: p,
                        model: "generalized Pareto",
                    });
                }
                let density = |y: f64| {
                    let x = (y - theta) / sigma;
                    if k == 0.0 {
                        (-x).exp() / sigma
                    } else {
                        (1.0 + k * x).powf(-1.0 / k - 1.0) / sigma
                    }
                };
                let tol = Tolerance {
                    rel: 1e-10,
                    abs: 1e-300,
                    max_subdivisions: 2000,
                };
                let split = theta + sigma;
                let est =
                    integrate_to_infinity(|y| Ok(y.powf(p) * density(y)), theta, split, &[], &tol)
                        .map_err(|e| e.in_operation("fading_fractional_moment"))?;
                Ok(est.value)
            }
        }
    }

    /// `E[h 1{h <= t}]`.
    pub fn truncated_mean(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        match *self {
            FadingModel::Rayleigh { rate } => {
                let x = rate * t;
                if x < 1e-3 {
                    // series of 1 - e^-x (1 + x)
                    t * x * (0.5 - x / 3.0 + x * x / 8.0)
                } else {
                    (1.0 - (-x).exp() * (1.0 + x)) / rate
                }
            }
            FadingModel::Nakagami { m, omega } => {
                omega * gamma_lr(m as f64 + 1.0, m as f64 * t / omega)
            }
            FadingModel::GeneralizedPareto { k, sigma, theta } => {
                if t <= theta {
                    return 0.0;
                }
                let x = t - theta;
                // int_0^x P(h - theta > u) du
                let survival_integral = if k == 0.0 {
                    -sigma * (-x / sigma).exp_m1()
                } else if (k - 1.0).abs() < 1e-12 {
                    sigma * (x / sigma).ln_1p()
                } else {
                    sigma / (k - 1.0) * ((1.0 + k * x / sigma).powf(1.0 - 1.0 / k) - 1.0)
                };
                theta * self.cdf(t) + survival_integral - x * self.ccdf(t)
            }
        }
    }

    /// Inverse of the CDF.
    pub fn quantile(&self, q: f64) -> f64 {
        let q = q.clamp(0.0, 1.0);
        match *self {
            FadingModel::Rayleigh { rate } => -(-q).ln_1p() / rate,
            FadingModel::GeneralizedPareto { k, sigma, theta } => {
                if k == 0.0 {
                    theta - sigma * (-q).ln_1p()
                } else {
                    theta + sigma * ((1.0 - q).powf(-k) - 1.0) / k
                }
            }
            FadingModel::Nakagami { .. } => {
                let mut lo = 0.0;
                let mut hi = 1.0;
                while self.cdf(hi) < q {
                    hi *= 2.0;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.cdf(mid) < q {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                hi
            }
        }
    }

    /// Mean power, or the mean truncated at the 0.999 quantile when the
    /// mean is infinite.
    pub fn effective_mean(&self) -> f64 {
        match self.mean() {
            Ok(m) => m,
            Err(_) => self.truncated_mean(self.quantile(0.999)),
        }
    }

    /// Draws one fading coefficient.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            FadingModel::Rayleigh { rate } => Exp::new(rate).expect("validated rate").sample(rng),
            FadingModel::Nakagami { m, omega } => GammaDist::new(m as f64, omega / m as f64)
                .expect("validated shape")
                .sample(rng),
            FadingModel::GeneralizedPareto { .. } => self.quantile(rng.random::<f64>()),
        }
    }

    /// Reusable sampler that avoids re-validating parameters per draw.
    pub fn sampler(&self) -> FadingSampler {
        match *self {
            FadingModel::Rayleigh { rate } => {
                FadingSampler::Exp(Exp::new(rate).expect("validated rate"))
            }
            FadingModel::Nakagami { m, omega } => FadingSampler::Gamma(
                GammaDist::new(m as f64, omega / m as f64).expect("validated shape"),
            ),
            FadingModel::GeneralizedPareto { .. } => FadingSampler::Inverse(*self),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum FadingSampler {
    Exp(Exp<f64>),
    Gamma(GammaDist<f64>),
    Inverse(FadingModel),
}

impl Distribution<f64> for FadingSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            FadingSampler::Exp(d) => d.sample(rng),
            FadingSampler::Gamma(d) => d.sample(rng),
            FadingSampler::Inverse(m) => m.quantile(rng.random::<f64>()),
        }
    }
}

pub fn pathloss_eval(pl: &PathLoss, x: Point) -> Result<f64> {
    pl.eval(x)
}

pub fn fading_cdf(fm: &FadingModel, y: f64) -> f64 {
    fm.cdf(y)
}

pub fn fading_laplace(fm: &FadingModel, s: f64) -> Result<f64> {
    fm.laplace(s)
}

pub fn fading_fractional_moment(fm: &FadingModel, p: f64) -> Result<f64> {
    fm.fractional_moment(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use crate::rng::Streams;
    use approx::assert_relative_eq;

    #[test]
    fn pathloss_examples() {
        assert_eq!(PathLoss::bounded(4.0).eval(Point::ORIGIN).unwrap(), 1.0);
        assert_relative_eq!(
            PathLoss::singular(4.0).eval(Point::new(2.0, 0.0)).unwrap(),
            0.0625
        );
        assert_eq!(
            PathLoss::clipped(4.0).eval(Point::new(0.5, 0.0)).unwrap(),
            1.0
        );
        assert_eq!(
            PathLoss::singular(4.0).eval(Point::ORIGIN),
            Err(Error::SingularAtOrigin)
        );
        assert_relative_eq!(
            PathLoss::singular(3.5).radial(2.0),
            2f64.powf(-3.5),
            max_relative = 1e-14
        );
        assert!(PathLoss::new(PathLossKind::Bounded, 2.0).is_err());
        for pl in [
            PathLoss::singular(3.0),
            PathLoss::bounded(4.0),
            PathLoss::clipped(4.0),
        ] {
            assert_relative_eq!(pl.radial(pl.inverse_radial(0.2)), 0.2, max_relative = 1e-12);
        }
    }

    #[test]
    fn pathloss_ratio_far_field() {
        for pl in [PathLoss::singular(4.0), PathLoss::bounded(4.0)] {
            let x = Point::new(1e4, 0.0);
            let worst = (0..64)
                .map(|i| Point::polar(1.0, i as f64 * PI / 32.0))
                .map(|y| (pl.eval(x).unwrap() / pl.eval(x - y).unwrap() - 1.0).abs())
                .fold(0.0, f64::max);
            assert!(worst < 1e-3, "{worst}");
        }
    }

    #[test]
    fn tail_integrals() {
        for pl in [
            PathLoss::singular(4.0),
            PathLoss::clipped(3.0),
            PathLoss::bounded(4.0),
        ] {
            for r in [0.5, 1.0, 3.0] {
                let tol = Tolerance::new(1e-11, 1e-300);
                let want = integrate_to_infinity(
                    |u| Ok(2.0 * PI * u * pl.radial(u)),
                    r,
                    r.max(1.0),
                    &[1.0],
                    &tol,
                )
                .unwrap()
                .value;
                assert_relative_eq!(pl.tail_integral(r).unwrap(), want, max_relative = 1e-8);
                let target = pl.tail_integral(r).unwrap();
                assert_relative_eq!(pl.tail_radius(target).unwrap(), r, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn cdf_examples() {
        let r = FadingModel::rayleigh(1.0);
        assert_eq!(r.cdf(0.0), 0.0);
        assert_relative_eq!(r.cdf(2f64.ln()), 0.5, max_relative = 1e-15);
        let n = FadingModel::Nakagami { m: 1, omega: 1.0 };
        for y in [0.1, 1.0, 5.0] {
            assert_relative_eq!(n.cdf(y), r.cdf(y), epsilon = 1e-12);
            assert_relative_eq!(n.ccdf(y), r.ccdf(y), epsilon = 1e-12);
        }
        let n3 = FadingModel::Nakagami { m: 3, omega: 2.0 };
        for y in [0.1, 1.0, 5.0] {
            assert_relative_eq!(n3.cdf(y) + n3.ccdf(y), 1.0, epsilon = 1e-12);
        }
        let gp = FadingModel::GeneralizedPareto {
            k: 1.0,
            sigma: 1.0,
            theta: 0.0,
        };
        assert_relative_eq!(gp.cdf(3.0), 0.75, max_relative = 1e-15);
    }

    #[test]
    fn laplace_examples() {
        for fm in [
            FadingModel::rayleigh(2.0),
            FadingModel::Nakagami { m: 2, omega: 1.0 },
        ] {
            assert_eq!(fm.laplace(0.0).unwrap(), 1.0);
        }
        assert_relative_eq!(FadingModel::rayleigh(2.0).laplace(2.0).unwrap(), 0.5);
        assert_relative_eq!(
            FadingModel::Nakagami { m: 2, omega: 1.0 }
                .laplace(2.0)
                .unwrap(),
            0.25
        );
        let gp = FadingModel::GeneralizedPareto {
            k: 1.0,
            sigma: 1.0,
            theta: 0.0,
        };
        assert!(matches!(gp.laplace(1.0), Err(Error::UnsupportedFading(_))));
        let n = FadingModel::Nakagami { m: 3, omega: 1.5 };
        for s in [1e-9, 0.3, 7.0] {
            assert_relative_eq!(
                n.laplace_deficit(s).unwrap(),
                1.0 - n.laplace(s).unwrap(),
                max_relative = 1e-6
            );
        }
    }

    #[test]
    fn fractional_moment_examples() {
        let half = PI.sqrt() / 2.0;
        assert_relative_eq!(
            FadingModel::rayleigh(1.0).fractional_moment(0.5).unwrap(),
            half,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            FadingModel::rayleigh(4.0).fractional_moment(0.5).unwrap(),
            0.5 * half,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            FadingModel::Nakagami { m: 1, omega: 1.0 }
                .fractional_moment(0.5)
                .unwrap(),
            half,
            max_relative = 1e-12
        );
        // Gamma(1/2) = sqrt(pi)
        assert_relative_eq!(
            FadingModel::rayleigh(1.0).fractional_moment(-0.5).unwrap(),
            PI.sqrt(),
            max_relative = 1e-12
        );
        // GP(k=1): E[h^p] = Gamma(1+p) Gamma(1-p)
        let gp = FadingModel::GeneralizedPareto {
            k: 1.0,
            sigma: 1.0,
            theta: 0.0,
        };
        assert_relative_eq!(
            gp.fractional_moment(0.5).unwrap(),
            PI / 2.0,
            max_relative = 1e-8
        );
        assert!(matches!(
            gp.fractional_moment(1.0),
            Err(Error::DivergentMoment { .. })
        ));
        assert!(gp.mean().is_err());
    }

    #[test]
    fn truncated_mean_matches_quadrature() {
        let models = [
            FadingModel::rayleigh(0.7),
            FadingModel::Nakagami { m: 3, omega: 2.0 },
            FadingModel::GeneralizedPareto {
                k: 1.0,
                sigma: 1.0,
                theta: 0.0,
            },
            FadingModel::GeneralizedPareto {
                k: 0.4,
                sigma: 2.0,
                theta: 0.5,
            },
            FadingModel::GeneralizedPareto {
                k: 0.0,
                sigma: 2.0,
                theta: 0.5,
            },
        ];
        let tol = Tolerance::new(1e-12, 1e-15);
        for fm in models {
            for t in [1e-4, 0.3, 2.0, 40.0] {
                // E[h 1{h<=t}] = int_0^t P(h > u) du - t P(h > t)
                let want =
                    integrate(|u| Ok(fm.ccdf(u)), 0.0, t, &tol).unwrap().value - t * fm.ccdf(t);
                assert_relative_eq!(
                    fm.truncated_mean(t),
                    want,
                    max_relative = 1e-7,
                    epsilon = 1e-14
                );
            }
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for fm in [
            FadingModel::rayleigh(2.0),
            FadingModel::Nakagami { m: 2, omega: 1.0 },
            FadingModel::GeneralizedPareto {
                k: 1.0,
                sigma: 1.0,
                theta: 0.0,
            },
        ] {
            for q in [0.1, 0.5, 0.999] {
                assert_relative_eq!(fm.cdf(fm.quantile(q)), q, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn sample_means() {
        let mut rng = Streams::new(5).trial(0);
        for (fm, mean) in [
            (FadingModel::rayleigh(2.0), 0.5),
            (FadingModel::Nakagami { m: 3, omega: 1.5 }, 1.5),
        ] {
            let s = fm.sampler();
            let n = 100_000;
            let xs: Vec<f64> = (0..n).map(|_| s.sample(&mut rng)).collect();
            let m = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
            assert!((m - mean).abs() < 3.0 * (var / n as f64).sqrt());
        }
    }
}
