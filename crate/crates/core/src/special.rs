//! Error-function helpers used by the closed-form Gaussian moments.

use std::f64::consts::PI;

/// Complementary error function.
#[inline]
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Scaled complementary error function `exp(x²)·erfc(x)`.
///
/// Stays finite and relatively accurate for large positive `x`, where
/// `erfc` alone underflows.
pub fn erfcx(x: f64) -> f64 {
    if x < 5.0 {
        if x < -26.0 {
            return f64::INFINITY;
        }
        return (x * x).exp() * libm::erfc(x);
    }
    // Laplace continued fraction, evaluated bottom-up:
    // erfcx(x) = 1/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let mut t = x;
    for k in (1..=60).rev() {
        t = x + 0.5 * k as f64 / t;
    }
    1.0 / (PI.sqrt() * t)
}

/// `(1 - exp(-x)) / x` for `x >= 0`, with the limit 1 at the origin.
#[inline]
pub fn one_minus_exp_over(x: f64) -> f64 {
    if x < 1e-4 {
        1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0
    } else {
        -(-x).exp_m1() / x
    }
}
