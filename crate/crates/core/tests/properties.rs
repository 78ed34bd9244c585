use clusternet::metrics::{beta, beta_fixed, ccdf_bounds, success_bounds, success_probability};
use clusternet::pgfl::conditional_pgfl;
use clusternet::quadrature::{integrate, Tolerance};
use clusternet::rng::Streams;
use clusternet::{
    ClusterModel, EmpiricalDistribution, FadingModel, Kernel, NetworkConfig, PathLoss,
    PathLossKind, Point, QuadratureSpec,
};
use proptest::prelude::*;
use rand::Rng;

fn fading() -> impl Strategy<Value = FadingModel> {
    prop_oneof![
        (0.2f64..5.0).prop_map(FadingModel::rayleigh),
        (1u32..=5, 0.2f64..3.0).prop_map(|(m, omega)| FadingModel::Nakagami { m, omega }),
        (0.0f64..0.9, 0.2f64..2.0, 0.0f64..1.0)
            .prop_map(|(k, sigma, theta)| FadingModel::GeneralizedPareto { k, sigma, theta }),
    ]
}

fn pathloss() -> impl Strategy<Value = PathLoss> {
    (
        prop_oneof![
            Just(PathLossKind::Singular),
            Just(PathLossKind::Bounded),
            Just(PathLossKind::ClippedSingular)
        ],
        2.5f64..5.0,
    )
        .prop_map(|(k, a)| PathLoss::new(k, a).unwrap())
}

fn model() -> impl Strategy<Value = ClusterModel> {
    (0.05f64..2.0, 0.0f64..5.0, 0.1f64..0.6, any::<bool>()).prop_map(|(lp, c, s, thomas)| {
        if thomas {
            ClusterModel::thomas(lp, c, s)
        } else {
            ClusterModel::matern(lp, c, s)
        }
    })
}

fn rayleigh_cfg() -> impl Strategy<Value = NetworkConfig> {
    (model(), pathloss(), 0.1f64..3.0, 0.1f64..2.0)
        .prop_map(|(m, pl, t, r)| NetworkConfig::new(m, pl, FadingModel::rayleigh(1.0), t, r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fading_cdf_is_a_distribution(f in fading(), a in 0.0f64..20.0, b in 0.0f64..20.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert_eq!(f.cdf(0.0), 0.0);
        prop_assert!(f.cdf(lo) <= f.cdf(hi));
        prop_assert!((0.0..=1.0).contains(&f.cdf(hi)));
        prop_assert!((f.cdf(hi) + f.ccdf(hi) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quantile_inverts_cdf(f in fading(), q in 0.01f64..0.99) {
        prop_assert!((f.cdf(f.quantile(q)) - q).abs() < 1e-9);
    }

    #[test]
    fn laplace_is_completely_monotone(f in fading().prop_filter("closed form", |f| !matches!(f, FadingModel::GeneralizedPareto { .. }))) {
        let l: Vec<f64> = (0..=100).map(|i| f.laplace(i as f64).unwrap()).collect();
        for w in l.windows(3) {
            prop_assert!(w[1] <= w[0]);
            prop_assert!(w[2] - 2.0 * w[1] + w[0] >= -1e-15);
        }
    }

    #[test]
    fn pathloss_is_monotone_and_invertible(pl in pathloss(), r in 0.01f64..50.0, dr in 0.0f64..5.0) {
        prop_assert!(pl.radial(r + dr) <= pl.radial(r));
        let v = pl.radial(r);
        if v < 1.0 {
            prop_assert!((pl.inverse_radial(v) / r - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn beta_is_a_probability(cfg in rayleigh_cfg(), x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let spec = QuadratureSpec { rel_tol: 1e-10, abs_tol: 1e-13, ..QuadratureSpec::default() };
        let p = Point::new(x, y);
        let b = beta(&cfg, p, &spec).unwrap();
        let bf = beta_fixed(&cfg, p, &spec).unwrap();
        prop_assert!((0.0..=1.0).contains(&b));
        prop_assert!((b + bf - 1.0).abs() < 1e-7);
    }

    #[test]
    fn success_within_bounds(cfg in rayleigh_cfg()) {
        let spec = QuadratureSpec::default();
        let p = success_probability(&cfg, &spec).unwrap();
        prop_assert!((0.0..=1.0).contains(&p.value));
        let b = success_bounds(&cfg, &spec).unwrap();
        prop_assert!(b.lower <= p.value + 1e-8);
        prop_assert!(p.value <= b.tight_upper + 1e-8);
        prop_assert!(b.tight_upper <= b.upper + 1e-8);
    }

    #[test]
    fn success_decreases_with_threshold(cfg in rayleigh_cfg(), factor in 1.1f64..4.0) {
        let spec = QuadratureSpec::default();
        let a = success_probability(&cfg, &spec).unwrap().value;
        let b = success_probability(&cfg.with_threshold(cfg.threshold * factor), &spec).unwrap().value;
        prop_assert!(b <= a + 1e-9);
    }

    #[test]
    fn ccdf_bounds_are_ordered(cfg in rayleigh_cfg(), f in fading(), y in 0.01f64..1e4) {
        let cfg = cfg.with_fading(f);
        let spec = QuadratureSpec::default();
        let b = ccdf_bounds(&cfg, y, &spec).unwrap();
        prop_assert!(0.0 <= b.lower && b.lower <= b.upper && b.upper <= 1.0);
        let b2 = ccdf_bounds(&cfg, 2.0 * y, &spec).unwrap();
        prop_assert!(b2.lower <= b.lower + 1e-8);
    }

    #[test]
    fn functional_lies_in_unit_interval(m in model(), cx in -1.0f64..1.0, r in 0.01f64..1.0) {
        let g = conditional_pgfl(&Kernel::ball_complement(Point::new(cx, 0.0), r), &m, &QuadratureSpec::default()).unwrap();
        prop_assert!((0.0..=1.0).contains(&g.value));
        prop_assert!(g.value <= g.unconditional + 1e-12);
        prop_assert!((g.value + g.deficit - 1.0).abs() < 1e-12);
    }

    #[test]
    fn streams_are_reproducible(seed in any::<u64>(), i in 0u64..1_000_000) {
        let s = Streams::new(seed);
        let a: u64 = s.trial(i).random();
        let b: u64 = s.trial(i).random();
        let c: u64 = s.trial(i + 1).random();
        prop_assert_eq!(a, b);
        prop_assert_ne!(a, c);
    }

    #[test]
    fn empirical_ccdf_is_monotone(values in prop::collection::vec(0.0f64..100.0, 1..200), a in 0.0f64..100.0, b in 0.0f64..100.0) {
        let d = EmpiricalDistribution::new(values, 0, 1.0);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(d.ccdf(hi) <= d.ccdf(lo));
        let q = d.quantile(0.5);
        prop_assert!(d.values()[0] <= q && q <= *d.values().last().unwrap());
    }

    #[test]
    fn quadrature_is_exact_on_cubics(c in prop::array::uniform4(-5.0f64..5.0), a in -3.0f64..0.0, b in 0.0f64..3.0) {
        let f = |x: f64| Ok(c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x);
        let exact = |x: f64| c[0] * x + c[1] * x * x / 2.0 + c[2] * x.powi(3) / 3.0 + c[3] * x.powi(4) / 4.0;
        let est = integrate(f, a, b, &Tolerance::default()).unwrap();
        prop_assert!((est.value - (exact(b) - exact(a))).abs() < 1e-10 * (1.0 + exact(b).abs() + exact(a).abs()));
    }
}
