//! Special functions not covered by `statrs`.

use std::f64::consts::PI;

/// Exponentially scaled modified Bessel function of the first kind, `exp(-x) I0(x)`,
/// for `x >= 0`.
pub fn bessel_i0e(x: f64) -> f64 {
    let x = x.abs();
    if x <= 30.0 {
        // power series, all terms positive
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k: f64 = 1.0;
        while term > 1e-17 * sum {
            term *= q / (k * k);
            sum += term;
            k += 1.0;
        }
        sum * (-x).exp()
    } else {
        // Hankel asymptotic expansion
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k: f64 = 1.0;
        loop {
            let next = term * (2.0 * k - 1.0).powi(2) / (k * 8.0 * x);
            if next > term || next < 1e-17 * sum {
                break;
            }
            term = next;
            sum += term;
            k += 1.0;
        }
        sum / (2.0 * PI * x).sqrt()
    }
}

/// `C(alpha) = (2 pi^2 / alpha) csc(2 pi / alpha)`, the area constant of the
/// Poisson outage exponent for power-law path loss.
pub fn pathloss_constant(alpha: f64) -> f64 {
    2.0 * PI * PI / alpha / (2.0 * PI / alpha).sin()
}
