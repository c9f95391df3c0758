//! The causal indicator of the light cone, the Minkowski form, and the
//! Gaussian-smeared cone symbols
//!
//! ```text
//! λ(ξ) = 1/(4mcπ²) ∫_V q(y) e^{-|y-ξ|²} d⁴y,    μ(ξ) = π^{-2} ∫_V e^{-|y-ξ|²} d⁴y,
//! ```
//!
//! where `V` is the (future or past) cone and `q` the Minkowski form. `λ` is
//! the momentum-space Hamiltonian of a free particle; `μ` is the smeared
//! cone indicator whose complement realizes the spectrum of `(P_Q - P_R)²`.

mod oracle;
mod radial;
mod table;

use serde::{Deserialize, Serialize};

use crate::error::{config, domain, Result};

pub use oracle::{lambda_oracle, OracleEstimate, OracleMethod};
pub use radial::{ln_lambda_reduced, ln_mu_reduced, ln_one_minus_mu_reduced};
pub use table::linspace;
pub use table::RadialTable;

/// A point of momentum space `(ξ₀, ξ₁, ξ₂, ξ₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourMomentum(pub [f64; 4]);

impl FourMomentum {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self([x0, x1, x2, x3])
    }

    pub fn time(&self) -> f64 {
        self.0[0]
    }

    /// `|ξ⃗|`, the Euclidean norm of the spatial part.
    pub fn spatial_norm(&self) -> f64 {
        let [_, a, b, c] = self.0;
        (a * a + b * b + c * c).sqrt()
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self(self.0.map(|x| t * x))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// Hyperbolic rotation by `rapidity` in the `(ξ₀, ξ₁)` plane.
    pub fn boosted(&self, rapidity: f64) -> Self {
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        let [x0, x1, x2, x3] = self.0;
        Self([ch * x0 + sh * x1, sh * x0 + ch * x1, x2, x3])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Future,
    /// The reflected cone, used for anti-particles.
    Past,
}

/// Units and cone choice. Natural units `m = c = ħ = 1` by default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConeConfig {
    pub mass: f64,
    pub c: f64,
    pub hbar: f64,
    pub orientation: Orientation,
}

impl Default for ConeConfig {
    fn default() -> Self {
        Self {
            mass: 1.0,
            c: 1.0,
            hbar: 1.0,
            orientation: Orientation::Future,
        }
    }
}

impl ConeConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("mass", self.mass), ("c", self.c), ("hbar", self.hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }
}

/// Controls for the one-dimensional radial quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadParams {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper limit of the radial integral; `None` uses `|ξ| + 10`.
    pub r_cutoff: Option<f64>,
    pub max_subdivisions: usize,
}

impl Default for QuadParams {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            r_cutoff: None,
            max_subdivisions: 200,
        }
    }
}

impl QuadParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(config("quadrature tolerances must be positive"));
        }
        if self.max_subdivisions == 0 {
            return Err(config("max_subdivisions must be at least 1"));
        }
        Ok(())
    }

    /// Radial cutoff for a point at Euclidean distance `norm` from the origin.
    pub(crate) fn cutoff_for(&self, norm: f64) -> Result<f64> {
        match self.r_cutoff {
            None => Ok(norm + 10.0),
            Some(r) if r >= norm + 8.0 => Ok(r),
            Some(r) => Err(config(format!(
                "r_cutoff {r} below the Gaussian tail bound {} for |ξ| = {norm}",
                norm + 8.0
            ))),
        }
    }
}

/// Indicator of the cone: `c·ξ₀ ≥ |ξ⃗|` (future) or `c·ξ₀ ≤ -|ξ⃗|` (past),
/// boundary included.
pub fn chi_cone(xi: &FourMomentum, cfg: &ConeConfig) -> u8 {
    let r = xi.spatial_norm();
    let inside = match cfg.orientation {
        Orientation::Future => cfg.c * xi.time() >= r,
        Orientation::Past => cfg.c * xi.time() <= -r,
    };
    u8::from(inside)
}

/// Minkowski form `ξ₀² - ξ₁² - ξ₂² - ξ₃²`.
pub fn minkowski_q(xi: &FourMomentum) -> f64 {
    let [a, b, c, d] = xi.0;
    a * a - b * b - c * c - d * d
}

/// `λ` at `ξ = (s, ρ, 0, 0)`.
pub fn lambda_reduced(s: f64, rho: f64, cfg: &ConeConfig, qp: &QuadParams) -> Result<f64> {
    ln_lambda_reduced(s, rho, cfg, qp).map(f64::exp)
}

/// `μ` at `ξ = (s, ρ, 0, 0)`.
pub fn mu_reduced(s: f64, rho: f64, cfg: &ConeConfig, qp: &QuadParams) -> Result<f64> {
    ln_mu_reduced(s, rho, cfg, qp).map(f64::exp)
}

/// `1 - μ` at `ξ = (s, ρ, 0, 0)`, resolved even where `μ` rounds to one.
pub fn one_minus_mu_reduced(s: f64, rho: f64, cfg: &ConeConfig, qp: &QuadParams) -> Result<f64> {
    ln_one_minus_mu_reduced(s, rho, cfg, qp).map(f64::exp)
}

/// `λ(ξ)`; depends on `ξ` only through `(ξ₀, |ξ⃗|)`.
pub fn lambda(xi: &FourMomentum, cfg: &ConeConfig, qp: &QuadParams) -> Result<f64> {
    lambda_reduced(xi.time(), xi.spatial_norm(), cfg, qp)
}

pub fn mu(xi: &FourMomentum, cfg: &ConeConfig, qp: &QuadParams) -> Result<f64> {
    mu_reduced(xi.time(), xi.spatial_norm(), cfg, qp)
}

/// Leading term `χ(ξ) q(ξ) / (4mc)` of `λ` far from the origin.
pub fn lambda_asymptotic(xi: &FourMomentum, cfg: &ConeConfig) -> f64 {
    f64::from(chi_cone(xi, cfg)) * minkowski_q(xi) / (4.0 * cfg.mass * cfg.c)
}

/// One row of an asymptotic-convergence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub t: f64,
    /// `λ(tξ)/t²`
    pub scaled_lambda: f64,
    /// `χ(ξ) q(ξ)/(4mc)`
    pub leading: f64,
    pub ratio: f64,
}

impl AsymptoticRow {
    pub fn relative_deviation(&self) -> f64 {
        (self.ratio - 1.0).abs()
    }
}

/// Tabulates `λ(tξ)/t²` against the leading term along the ray through `ξ`.
pub fn asymptotic_convergence(
    xi: &FourMomentum,
    t_list: &[f64],
    cfg: &ConeConfig,
    qp: &QuadParams,
) -> Result<Vec<AsymptoticRow>> {
    let leading = lambda_asymptotic(xi, cfg);
    if leading <= 0.0 {
        return Err(domain(format!(
            "ξ = {:?} is not strictly inside the cone; the leading term vanishes",
            xi.0
        )));
    }
    if t_list.iter().any(|&t| !(t > 0.0 && t.is_finite()))
        || t_list.windows(2).any(|w| w[1] <= w[0])
    {
        return Err(domain("scale factors must be positive and strictly increasing"));
    }
    t_list
        .iter()
        .map(|&t| {
            let scaled_lambda = lambda(&xi.scaled(t), cfg, qp)? / (t * t);
            Ok(AsymptoticRow {
                t,
                scaled_lambda,
                leading,
                ratio: scaled_lambda / leading,
            })
        })
        .collect()
}

/// `|λ(Λξ) - λ(ξ)| / λ(ξ)` for a boost `Λ` of the given rapidity.
///
/// Diagnostic only: the Euclidean Gaussian smearing is rotation- but not
/// boost-invariant, so nonzero values are expected.
pub fn lorentz_deviation(
    xi: &FourMomentum,
    rapidity: f64,
    cfg: &ConeConfig,
    qp: &QuadParams,
) -> Result<f64> {
    let base = ln_lambda_reduced(xi.time(), xi.spatial_norm(), cfg, qp)?;
    let b = xi.boosted(rapidity);
    let moved = ln_lambda_reduced(b.time(), b.spatial_norm(), cfg, qp)?;
    Ok((moved - base).exp_m1().abs())
}
