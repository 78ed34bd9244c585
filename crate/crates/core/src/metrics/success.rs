//! Link success probability: the Poisson reference, the exact clustered
//! formulas for Rayleigh and Nakagami fading, and closed-form bounds.

use crate::channel::{FadingModel, PathLoss, PathLossKind};
use crate::error::{Error, Result};
use crate::geometry::{CountLaw, Point};
use crate::network::NetworkConfig;
use crate::pgfl::{
    conditional_laplace_interference, conditional_pgfl, integrate_over_parent, radial_conv_deficit,
    Kernel, QuadratureSpec,
};
use crate::quadrature::integrate_power_tail;
use crate::special::pathloss_constant;

/// Outage kernel `q(u) = g(u) / (g(R)/T + g(u))` centred at the receiver;
/// `beta(R, y)` is its convolution with the daughter density.
pub fn success_kernel(cfg: &NetworkConfig) -> Kernel {
    let pl = cfg.pathloss;
    let ratio = cfg.link_gain() / cfg.threshold;
    Kernel::radial(
        "success",
        cfg.receiver(),
        move |u| 1.0 / (1.0 + ratio / pl.radial(u)),
        kinks(&pl),
        None,
        ratio.powf(-1.0 / pl.alpha),
    )
    .with_power_tail(pl.alpha)
}

fn kinks(pl: &PathLoss) -> Vec<f64> {
    match pl.kind {
        PathLossKind::ClippedSingular => vec![1.0],
        _ => vec![],
    }
}

fn require_rayleigh(cfg: &NetworkConfig, op: &'static str) -> Result<f64> {
    match cfg.fading {
        FadingModel::Rayleigh { rate } => Ok(rate),
        _ => Err(Error::Unsupported(format!("{op} requires Rayleigh fading"))),
    }
}

/// `beta(R, y) = int q(x - y - z) f(x) dx`.
pub fn beta(cfg: &NetworkConfig, y: Point, spec: &QuadratureSpec) -> Result<f64> {
    cfg.validate()?;
    radial_conv_deficit(
        &success_kernel(cfg),
        &cfg.cluster.scattering,
        (y + cfg.receiver()).norm(),
        spec,
    )
    .map_err(|e| e.in_operation("beta"))
}

/// `int f(x) / (1 + T g(x - y - z) / g(R)) dx`, which equals `1 - beta(R, y)`.
pub fn beta_fixed(cfg: &NetworkConfig, y: Point, spec: &QuadratureSpec) -> Result<f64> {
    cfg.validate()?;
    let pl = cfg.pathloss;
    let ratio = cfg.threshold / cfg.link_gain();
    let k = Kernel::radial(
        "success-complement",
        cfg.receiver(),
        move |u| 1.0 / (1.0 + ratio * pl.radial(u)),
        kinks(&pl),
        None,
        1.0,
    );
    radial_conv_deficit(
        &k,
        &cfg.cluster.scattering,
        (y + cfg.receiver()).norm(),
        spec,
    )
    .map_err(|e| e.in_operation("beta_fixed"))
}

/// Integrals and extremes of `beta(R, .)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaSummary {
    /// `int beta(R, y) dy`, independent of the daughter density.
    pub beta_i: f64,
    /// `sup_y beta(R, y)`.
    pub beta_hat: f64,
    /// `int beta(R, y) f(y) dy`.
    pub kappa: f64,
    /// `sup (f * f)`.
    pub f_hat_star: f64,
    /// `|y + z|` at which the supremum is attained.
    pub beta_hat_at: f64,
}

/// `int q(x) dx` for the outage kernel of `pathloss` at threshold `t` and
/// link distance `r`.
pub fn beta_integral(pathloss: &PathLoss, t: f64, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    let ratio = pathloss.radial(r) / t;
    let scale = ratio.powf(-1.0 / pathloss.alpha);
    let pl = *pathloss;
    let est = integrate_power_tail(
        |u| Ok(2.0 * std::f64::consts::PI * u / (1.0 + ratio / pl.radial(u))),
        0.0,
        2.0 * scale,
        &kinks(pathloss),
        &spec.tolerance(),
        pl.alpha - 1.0,
    )
    .map_err(|e| e.in_operation("beta_integral"))?;
    Ok(est.value)
}

pub fn beta_summary(cfg: &NetworkConfig, spec: &QuadratureSpec) -> Result<BetaSummary> {
    cfg.validate()?;
    let kernel = success_kernel(cfg);
    let s = cfg.cluster.scattering;
    let b = |d: f64| {
        radial_conv_deficit(&kernel, &s, d, spec).map_err(|e| e.in_operation("beta_summary"))
    };

    let beta_i = beta_integral(&cfg.pathloss, cfg.threshold, cfg.link_distance, spec)?;
    let kappa = integrate_over_parent(&kernel, &s, spec, |w| w)
        .map_err(|e| e.in_operation("beta_summary"))?
        .value;

    // beta(R, .) is radial about -z: search its profile over the distance
    let scale = (cfg.link_gain() / cfg.threshold).powf(-1.0 / cfg.pathloss.alpha);
    let span = 3.0 * (s.reach() + scale);
    let n = 64;
    let grid: Vec<f64> = (0..=n).map(|i| span * i as f64 / n as f64).collect();
    let mut values = Vec::with_capacity(grid.len());
    for &d in &grid {
        values.push(b(d)?);
    }
    let best = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(n)];
    let (at, refined) = golden_max(&b, lo, hi, values[best], grid[best])?;
    Ok(BetaSummary {
        beta_i,
        beta_hat: refined.min(1.0),
        kappa,
        f_hat_star: s.selfconv_max(),
        beta_hat_at: at,
    })
}

fn golden_max<F>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    best_value: f64,
    best_at: f64,
) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..60 {
        if (b - a).abs() <= 1e-10 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    let (x, v) = if fc > fd { (c, fc) } else { (d, fd) };
    Ok(if v >= best_value {
        (x, v)
    } else {
        (best_at, best_value)
    })
}

/// Success probability when the transmitters form a Poisson process of
/// intensity `lambda`, Rayleigh fading and no noise.
///
/// Closed form for singular and bounded path loss, quadrature otherwise.
pub fn poisson_success(pathloss: &PathLoss, t: f64, r: f64, lambda: f64) -> Result<f64> {
    pathloss.validate()?;
    let a = pathloss.alpha;
    let c = pathloss_constant(a);
    let delta = 2.0 / a;
    match pathloss.kind {
        PathLossKind::Singular => Ok((-lambda * r * r * t.powf(delta) * c).exp()),
        PathLossKind::Bounded => {
            let g = pathloss.radial(r);
            Ok((-lambda * t * c * (t + g).powf(delta - 1.0) * g.powf(-delta)).exp())
        }
        PathLossKind::ClippedSingular => poisson_success_generic(
            pathloss,
            t,
            r,
            lambda,
            &QuadratureSpec::default().tightened(100.0),
        ),
    }
}

/// `exp(-lambda beta_I)` with `beta_I` by quadrature.
pub fn poisson_success_generic(
    pathloss: &PathLoss,
    t: f64,
    r: f64,
    lambda: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    Ok((-lambda * beta_integral(pathloss, t, r, spec)?).exp())
}

/// Success probability with its two clustered factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessProbability {
    pub value: f64,
    /// Contribution of the clusters other than the transmitter's own.
    pub p1: f64,
    /// Contribution of the transmitter's own cluster.
    pub p2: f64,
    /// `exp(-mu T W / g(R))`.
    pub noise_factor: f64,
    pub error: f64,
}

fn clustered_success(cfg: &NetworkConfig, spec: &QuadratureSpec) -> Result<SuccessProbability> {
    let rate = require_rayleigh(cfg, "success_probability")?;
    cfg.validate()?;
    let noise_factor = (-rate * cfg.threshold * cfg.noise / cfg.link_gain()).exp();
    let g = conditional_pgfl(&success_kernel(cfg), &cfg.cluster, spec)
        .map_err(|e| e.in_operation("success_probability"))?;
    Ok(SuccessProbability {
        value: g.value * noise_factor,
        p1: g.unconditional,
        p2: g.representative,
        noise_factor,
        error: g.error * noise_factor,
    })
}

/// Probability that a transmitter at the origin reaches the receiver at
/// `(R, 0)` under Rayleigh fading.
pub fn success_probability(
    cfg: &NetworkConfig,
    spec: &QuadratureSpec,
) -> Result<SuccessProbability> {
    clustered_success(cfg, spec)
}

/// Success probability when every cluster has exactly `n` points.
pub fn success_probability_fixed(
    cfg: &NetworkConfig,
    spec: &QuadratureSpec,
) -> Result<SuccessProbability> {
    if !matches!(cfg.cluster.count_law, CountLaw::FixedCount(_)) {
        return Err(Error::Unsupported(
            "success_probability_fixed requires a fixed cluster size".into(),
        ));
    }
    if cfg.noise != 0.0 {
        return Err(Error::Unsupported(
            "success_probability_fixed assumes no noise".into(),
        ));
    }
    clustered_success(cfg, spec)
}

/// Largest Nakagami shape accepted by [`success_probability_nakagami`].
pub const MAX_NAKAGAMI_SHAPE: u32 = 5;

/// Success probability under Nakagami-m fading on every link, from the
/// derivatives of the Laplace transform of the interference.
pub fn success_probability_nakagami(cfg: &NetworkConfig, spec: &QuadratureSpec) -> Result<f64> {
    let FadingModel::Nakagami { m, omega } = cfg.fading else {
        return Err(Error::Unsupported(
            "success_probability_nakagami requires Nakagami fading".into(),
        ));
    };
    cfg.validate()?;
    if m > MAX_NAKAGAMI_SHAPE {
        return Err(Error::invalid(
            "m",
            format!("Nakagami shape must be at most {MAX_NAKAGAMI_SHAPE}"),
        ));
    }
    if cfg.noise != 0.0 {
        return Err(Error::Unsupported(
            "success_probability_nakagami assumes no noise".into(),
        ));
    }
    if !matches!(cfg.cluster.count_law, CountLaw::PoissonCount) {
        return Err(Error::Unsupported(
            "success_probability_nakagami requires Poisson cluster sizes".into(),
        ));
    }
    let s = cfg.threshold * m as f64 / (omega * cfg.link_gain());
    let tight = spec.tightened(100.0);
    let laplace = |u: f64| conditional_laplace_interference(cfg, s * (1.0 + u), &tight);
    let mut total = laplace(0.0)?;
    let order = 2 * (m as usize + 1);
    let mut factorial = 1.0;
    for k in 1..m as usize {
        factorial *= k as f64;
        // k-th derivative of u -> L(s (1 + u)) at 0 is s^k L^(k)(s)
        let h = spec.rel_tol.powf(1.0 / (k as f64 + 2.0));
        let coarse = central_difference(&laplace, k, order, h)?;
        let fine = central_difference(&laplace, k, order, 0.5 * h)?;
        let scale = 2f64.powi(order as i32);
        let extrapolated = (scale * fine - coarse) / (scale - 1.0);
        let term = extrapolated / factorial;
        if (extrapolated - fine).abs() / factorial > 10.0 * spec.rel_tol {
            return Err(Error::DerivativeInstability {
                order: k,
                first: fine,
                second: extrapolated,
            });
        }
        total += if k % 2 == 1 { -term } else { term };
    }
    Ok(total.clamp(0.0, 1.0))
}

fn central_difference<F>(f: &F, k: usize, order: usize, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let p = k.div_ceil(2) + order / 2 - 1;
    let nodes: Vec<f64> = (-(p as i64)..=p as i64).map(|j| j as f64).collect();
    let w = fornberg_weights(&nodes, k);
    let mut sum = 0.0;
    for (x, c) in nodes.iter().zip(&w) {
        if *c != 0.0 {
            sum += c * f(x * h)?;
        }
    }
    Ok(sum / h.powi(k as i32))
}

/// Weights of the `k`-th derivative at 0 on the given nodes.
fn fornberg_weights(x: &[f64], k: usize) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![vec![0.0; k + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0];
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(k);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i];
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for l in (1..=mn).rev() {
                    c[i][l] = c1 * (l as f64 * c[i - 1][l - 1] - c5 * c[i - 1][l]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for l in (1..=mn).rev() {
                c[j][l] = (c4 * c[j][l] - l as f64 * c[j][l - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[k]).collect()
}

/// Closed-form bounds on the Rayleigh success probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessBounds {
    pub lower: f64,
    pub upper: f64,
    pub tight_upper: f64,
}

pub fn success_bounds(cfg: &NetworkConfig, spec: &QuadratureSpec) -> Result<SuccessBounds> {
    require_rayleigh(cfg, "success_bounds")?;
    if cfg.noise != 0.0 {
        return Err(Error::Unsupported("success_bounds assume no noise".into()));
    }
    let b = beta_summary(cfg, spec)?;
    Ok(bounds_from_summary(
        &b,
        cfg.cluster.intensity(),
        cfg.cluster.mean_cluster_size,
    ))
}

/// Bounds for total intensity `lambda` and mean cluster size `c`.
pub fn bounds_from_summary(b: &BetaSummary, lambda: f64, c: f64) -> SuccessBounds {
    let pp = |x: f64| (-x * b.beta_i).exp();
    let x = c * b.beta_hat;
    // (1 - e^-x) / x and 1 - e^-x without cancellation
    let one_minus = -(-x).exp_m1();
    let ratio = if x > 0.0 { one_minus / x } else { 1.0 };
    let own = if b.beta_hat > 0.0 {
        1.0 - one_minus * b.kappa / b.beta_hat
    } else {
        1.0
    };
    SuccessBounds {
        lower: pp(lambda) * pp(c * b.f_hat_star),
        upper: pp(lambda / (1.0 + x)),
        tight_upper: pp(lambda * ratio) * own,
    }
}
