//! Reduction of the four-dimensional cone integrals to one radial quadrature.
//!
//! With `ξ = (s, ρ, 0, 0)` and `y = (y₀, r ω)`:
//! * the angular integral is `∫_{S²} e^{2rρ cos θ} dΩ = 4π sinh(2rρ)/(2rρ)`,
//!   folded with `e^{-r²-ρ²}` into `e^{-(r-ρ)²} (1 - e^{-4rρ})/(4rρ)`;
//! * the `y₀` integral over `y₀ ≥ r/c` is a truncated Gaussian moment,
//!   written with `erfc` or, when the truncation point lies beyond the
//!   Gaussian centre, with the scaled `erfcx` recurrence.
//!
//! The remaining integrand is rescaled by its peak exponential factor so
//! the result is returned as a logarithm and never underflows.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;
use crate::special::{erfc, erfcx, one_minus_exp_over};

use super::{ConeConfig, Orientation, QuadParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Weight {
    /// `q(y) = y₀² - |y⃗|²`
    Minkowski,
    /// `1`
    Unit,
    /// `1` over the complement `y₀ < |y⃗|/c`
    Complement,
}

/// `ln λ(s, ρ)`.
pub fn ln_lambda_reduced(s: f64, rho: f64, cfg: &ConeConfig, qp: &QuadParams) -> Result<f64> {
    ln_cone_integral(s, rho, cfg, qp, Weight::Minkowski)
}

/// `ln μ(s, ρ)`.
pub fn ln_mu_reduced(s: f64, rho: f64, cfg: &ConeConfig, qp: &QuadParams) -> Result<f64> {
    ln_cone_integral(s, rho, cfg, qp, Weight::Unit)
}

/// `ln(1 - μ(s, ρ))`, integrated over the complement of the cone so it
/// stays resolved where `μ` rounds to one.
pub fn ln_one_minus_mu_reduced(
    s: f64,
    rho: f64,
    cfg: &ConeConfig,
    qp: &QuadParams,
) -> Result<f64> {
    ln_cone_integral(s, rho, cfg, qp, Weight::Complement)
}

/// `∫_{y₀ ≥ a} w(y₀, r) e^{-(y₀-s)²} dy₀ = e^{-max(b,0)²} · Y`, `b = a - s`.
/// Returns `Y`. For the complement the range is `y₀ < a` and the scale is
/// `e^{-min(b,0)²}`.
fn time_moment(a: f64, r: f64, s: f64, weight: Weight) -> f64 {
    let b = a - s;
    let half_sqrt_pi = 0.5 * PI.sqrt();
    if weight == Weight::Complement {
        return if b < 0.0 {
            half_sqrt_pi * erfcx(-b)
        } else {
            half_sqrt_pi * erfc(-b)
        };
    }
    // Moments M_k = ∫_0^∞ v^k e^{-(v+b)²} dv, or N_k = e^{b²} M_k when b > 0.
    let (m0, m1, m2) = if b > 0.0 {
        // 2N_{k+1} + 2b N_k = k N_{k-1}, N_0 = (√π/2) erfcx(b)
        let n0 = half_sqrt_pi * erfcx(b);
        let n1 = 0.5 * (1.0 - 2.0 * b * n0);
        let n2 = 0.5 * (n0 - 2.0 * b * n1);
        (n0, n1, n2)
    } else {
        let m0 = half_sqrt_pi * erfc(b);
        let g = (-b * b).exp();
        let m1 = 0.5 * g - b * m0;
        let m2 = -0.5 * b * g + (0.5 + b * b) * m0;
        (m0, m1, m2)
    };
    match weight {
        Weight::Unit | Weight::Complement => m0,
        // y₀ = a + v:  y₀² - r² = v² + 2av + (a² - r²)
        Weight::Minkowski => m2 + 2.0 * a * m1 + (a * a - r * r) * m0,
    }
}

fn exponent(r: f64, rho: f64, s: f64, c: f64, weight: Weight) -> f64 {
    let b = r / c - s;
    let d = r - rho;
    let outside = match weight {
        Weight::Complement => b < 0.0,
        _ => b > 0.0,
    };
    -d * d - if outside { b * b } else { 0.0 }
}

fn ln_cone_integral(
    s: f64,
    rho: f64,
    cfg: &ConeConfig,
    qp: &QuadParams,
    weight: Weight,
) -> Result<f64> {
    if !(rho >= 0.0 && rho.is_finite() && s.is_finite()) {
        return Err(crate::error::domain(format!(
            "radial coordinates (s = {s}, ρ = {rho}) must be finite with ρ ≥ 0"
        )));
    }
    cfg.validate()?;
    qp.validate()?;
    // The past cone is the reflection ξ₀ → -ξ₀ of the future cone.
    let s = match cfg.orientation {
        Orientation::Future => s,
        Orientation::Past => -s,
    };
    let c = cfg.c;
    let r_max = qp.cutoff_for(s.hypot(rho))?;

    // Peak of the concave exponent over [0, r_max].
    let clamp = |r: f64| r.clamp(0.0, r_max);
    let r_star = (rho + s / c) / (1.0 + 1.0 / (c * c));
    let peak = [0.0, clamp(rho), clamp(c * s), clamp(r_star), r_max]
        .into_iter()
        .map(|r| exponent(r, rho, s, c, weight))
        .fold(f64::NEG_INFINITY, f64::max);

    let integrand = |r: f64| {
        let y = time_moment(r / c, r, s, weight);
        r * r * one_minus_exp_over(4.0 * r * rho) * (exponent(r, rho, s, c, weight) - peak).exp() * y
    };
    let prefactor = match weight {
        // (1/(4mcπ²)) · 4π
        Weight::Minkowski => 1.0 / (cfg.mass * cfg.c * PI),
        // π^{-2} · 4π
        Weight::Unit | Weight::Complement => 4.0 / PI,
    };
    let breaks = [rho - 6.0, rho - 3.0, rho, rho + 3.0, rho + 6.0, c * s, r_star];
    let abs_tol_scaled = qp.abs_tol / prefactor * (-peak).exp();
    let est = integrate_adaptive(
        integrand,
        0.0,
        r_max,
        &breaks,
        qp.rel_tol,
        abs_tol_scaled,
        qp.max_subdivisions,
    )
    .map_err(|e| Error::Convergence {
        value: prefactor * e.value * peak.exp(),
        error_estimate: prefactor * e.error * peak.exp(),
        subdivisions: e.subdivisions,
        context: format!("{weight:?} cone integral at s = {s}, ρ = {rho}"),
    })?;
    if !(est.value > 0.0 && est.value.is_finite()) {
        return Err(Error::Consistency(format!(
            "{weight:?} cone integral at s = {s}, ρ = {rho} is not positive: {:e}",
            est.value
        )));
    }
    Ok(peak + (prefactor * est.value).ln())
}
