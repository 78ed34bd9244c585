//! Globally adaptive Gauss-Kronrod (G10/K21) integration on finite and
//! semi-infinite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_688_160,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// weights of the embedded 10-point Gauss rule, at XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Error targets and work budget of one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self {
            rel,
            abs,
            max_subdivisions: 400,
        }
    }

    /// Tolerance for an integral nested inside another one.
    pub fn inner(&self) -> Self {
        Self {
            rel: self.rel / 10.0,
            abs: self.abs / 10.0,
            max_subdivisions: self.max_subdivisions,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rel: self.rel * factor,
            abs: self.abs * factor,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-6, 1e-10)
    }
}

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    // x = split / t^power for t in (0, 1]
    Inverse { split: f64, power: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    map: Map,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F>(f: &mut F, a: f64, b: f64, map: Map) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |t: f64| -> Result<f64> {
        let v = match map {
            Map::Identity => f(t)?,
            Map::Inverse { split, power } => {
                let x = split / t.powf(power);
                let jacobian = power * x / t;
                if jacobian.is_finite() {
                    f(x)? * jacobian
                } else {
                    0.0
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand {
                operation: "integrate",
                at: t,
            })
        }
    };

    let mut fv = [(0.0, 0.0); 10];
    let fc = eval(center)?;
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
        *slot = (f1, f2);
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - reskh).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        resasc += WGK[j] * ((f1 - reskh).abs() + (f2 - reskh).abs());
    }
    let result = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((result, err))
}

fn adaptive<F>(mut f: F, initial: &[(f64, f64, Map)], tol: &Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for &(a, b, map) in initial {
        if b > a {
            let (value, error) = kronrod(&mut f, a, b, map)?;
            evaluations += 21;
            heap.push(Piece {
                a,
                b,
                map,
                value,
                error,
            });
        }
    }
    let totals = |heap: &BinaryHeap<Piece>| {
        heap.iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
    };
    let (mut value, mut error) = totals(&heap);
    let mut previous = value;
    let mut subdivisions = 0;
    while error > tol.abs.max(tol.rel * value.abs()) {
        if subdivisions >= tol.max_subdivisions {
            return Err(Error::NonConvergence {
                operation: "integrate",
                subdivisions,
                last: value,
                previous,
                error,
            });
        }
        let worst = heap.pop().expect("non-empty while error is positive");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine resolution; accept what we have
            heap.push(Piece {
                error: 0.0,
                ..worst
            });
        } else {
            for (a, b) in [(worst.a, mid), (mid, worst.b)] {
                let (v, e) = kronrod(&mut f, a, b, worst.map)?;
                evaluations += 21;
                heap.push(Piece {
                    a,
                    b,
                    map: worst.map,
                    value: v,
                    error: e,
                });
            }
        }
        subdivisions += 1;
        previous = value;
        let t = totals(&heap);
        value = t.0;
        error = t.1;
    }
    Ok(Estimate {
        value,
        error,
        evaluations,
    })
}

fn finite_pieces(a: f64, b: f64, breaks: &[f64]) -> Vec<(f64, f64, Map)> {
    let mut pts: Vec<f64> = std::iter::once(a)
        .chain(breaks.iter().copied().filter(|&x| x > a && x < b))
        .chain(std::iter::once(b))
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.windows(2)
        .map(|w| (w[0], w[1], Map::Identity))
        .collect()
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_with_breaks(f, a, b, &[], tol)
}

/// Integrates `f` over `[a, b]`, starting from a partition at the given
/// interior points (kinks or jumps of the integrand).
pub fn integrate_with_breaks<F>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    tol: &Tolerance,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if b <= a {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    adaptive(f, &finite_pieces(a, b, breaks), tol)
}

/// Integrates `f` over `[a, inf)`. The part beyond `split` is mapped onto
/// `(0, 1]` through `x = split / t`.
pub fn integrate_to_infinity<F>(
    f: F,
    a: f64,
    split: f64,
    breaks: &[f64],
    tol: &Tolerance,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_tail(f, a, split, breaks, tol, 1.0)
}

/// Like [`integrate_to_infinity`] for an integrand decaying like
/// `x^-decay` with `decay > 1`. The map `x = split / t^p` is chosen so the
/// mapped integrand vanishes at `t = 0` instead of being singular there.
pub fn integrate_power_tail<F>(
    f: F,
    a: f64,
    split: f64,
    breaks: &[f64],
    tol: &Tolerance,
    decay: f64,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(decay > 1.0) {
        return Err(Error::invalid("decay", "tail must decay faster than 1/x"));
    }
    integrate_tail(
        f,
        a,
        split,
        breaks,
        tol,
        (2.0 / (decay - 1.0)).clamp(1.0, 8.0),
    )
}

fn integrate_tail<F>(
    f: F,
    a: f64,
    split: f64,
    breaks: &[f64],
    tol: &Tolerance,
    power: f64,
) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let split = split.max(a);
    if split <= 0.0 {
        return Err(Error::invalid("split", "tail split point must be positive"));
    }
    let mut pieces = finite_pieces(a, split, breaks);
    pieces.retain(|p| p.1 > p.0);
    pieces.push((0.0, 1.0, Map::Inverse { split, power }));
    adaptive(f, &pieces, tol)
}

/// Infallible convenience wrapper.
pub fn integrate_fn<F>(mut f: F, a: f64, b: f64, tol: &Tolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    integrate(|x| Ok(f(x)), a, b, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let tol = Tolerance::default();
        let est = integrate_fn(|x| 3.0 * x * x - x + 2.0, -1.0, 2.0, &tol).unwrap();
        assert_relative_eq!(est.value, 9.0 - 1.5 + 6.0, max_relative = 1e-14);
        assert_eq!(est.evaluations, 21);
    }

    #[test]
    fn gaussian_over_half_line() {
        let tol = Tolerance::new(1e-10, 1e-14);
        let est = integrate_to_infinity(|x| Ok((-x * x).exp()), 0.0, 2.0, &[], &tol).unwrap();
        assert_relative_eq!(est.value, PI.sqrt() / 2.0, max_relative = 1e-10);
    }

    #[test]
    fn power_tail_is_integrated_exactly() {
        // int_1^inf x^-3 dx = 1/2
        let tol = Tolerance::new(1e-10, 1e-14);
        let est = integrate_to_infinity(|x| Ok(x.powi(-3)), 1.0, 1.0, &[], &tol).unwrap();
        assert_relative_eq!(est.value, 0.5, max_relative = 1e-10);
    }

    #[test]
    fn slow_power_tail() {
        let tol = Tolerance::new(1e-10, 0.0);
        let est = integrate_power_tail(|x| Ok(x.powf(-1.25)), 1.0, 1.0, &[], &tol, 1.25).unwrap();
        assert!((est.value - 4.0).abs() < 1e-9, "{est:?}");
    }

    #[test]
    fn jump_handled_with_breakpoint() {
        let tol = Tolerance::new(1e-12, 1e-14);
        let step = |x: f64| if x < 0.3 { 1.0 } else { 0.0 };
        let est = integrate_with_breaks(|x| Ok(step(x)), 0.0, 1.0, &[0.3], &tol).unwrap();
        assert_relative_eq!(est.value, 0.3, max_relative = 1e-14);
    }

    #[test]
    fn non_convergence_reports_estimates() {
        let tol = Tolerance {
            rel: 1e-15,
            abs: 0.0,
            max_subdivisions: 3,
        };
        let err = integrate_fn(|x| x.sqrt().sin() / x.sqrt(), 1e-300, 1.0, &tol).unwrap_err();
        match err {
            Error::NonConvergence {
                subdivisions,
                last,
                previous,
                ..
            } => {
                assert_eq!(subdivisions, 3);
                assert!(last.is_finite() && previous.is_finite());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let err = integrate_fn(|_| f64::NAN, 0.0, 1.0, &Tolerance::default()).unwrap_err();
        assert!(matches!(err, Error::NonFiniteIntegrand { .. }));
    }
}
