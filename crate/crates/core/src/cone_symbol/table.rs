use rayon::prelude::*;

use crate::error::{config, domain, Result};

use super::radial::{ln_lambda_reduced, ln_mu_reduced, ln_one_minus_mu_reduced};
use super::{ConeConfig, QuadParams};

/// Cached `λ` and `μ` on a rectangular `(s, ρ)` grid.
///
/// Values are stored as logarithms, which keeps them strictly positive far
/// outside the cone and makes the Gaussian tails nearly quadratic for the
/// interpolant. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialTable {
    pub s_grid: Vec<f64>,
    pub rho_grid: Vec<f64>,
    /// `ln λ`, row-major with `s` as the outer index.
    pub ln_lambda: Vec<f64>,
    /// `ln μ`, same layout.
    pub ln_mu: Vec<f64>,
    /// `ln(1 - μ)` from the complementary integral, same layout.
    pub ln_one_minus_mu: Vec<f64>,
    pub config: ConeConfig,
    pub quad: QuadParams,
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => {
            let h = (b - a) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { b } else { a + i as f64 * h }).collect()
        }
    }
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(config(format!("{name} grid is empty")));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(config(format!("{name} grid must be finite and strictly increasing")));
    }
    Ok(())
}

impl RadialTable {
    pub fn build(
        s_grid: Vec<f64>,
        rho_grid: Vec<f64>,
        config: ConeConfig,
        quad: QuadParams,
    ) -> Result<Self> {
        check_grid("s", &s_grid)?;
        check_grid("rho", &rho_grid)?;
        if rho_grid[0] < 0.0 {
            return Err(crate::error::config("rho grid must be nonnegative"));
        }
        let nr = rho_grid.len();
        let values: Vec<[f64; 3]> = (0..s_grid.len() * nr)
            .into_par_iter()
            .map(|k| {
                let (s, rho) = (s_grid[k / nr], rho_grid[k % nr]);
                Ok([
                    ln_lambda_reduced(s, rho, &config, &quad)?,
                    ln_mu_reduced(s, rho, &config, &quad)?,
                    ln_one_minus_mu_reduced(s, rho, &config, &quad)?,
                ])
            })
            .collect::<Result<_>>()?;
        // μ and 1 - μ come from disjoint integrals; their sum is a free check.
        for (k, v) in values.iter().enumerate() {
            let total = v[1].exp() + v[2].exp();
            if (total - 1.0).abs() > 1e-8 {
                return Err(crate::Error::Consistency(format!(
                    "μ + (1 - μ) = {total} at (s, ρ) = ({}, {})",
                    s_grid[k / nr],
                    rho_grid[k % nr]
                )));
            }
        }
        // Each logarithm is taken from whichever of μ, 1 - μ is the smaller,
        // so both stay strictly negative in floating point.
        let (ln_mu, ln_one_minus_mu) = values
            .iter()
            .map(|v| {
                if v[1] <= v[2] {
                    (v[1], (-v[1].exp()).ln_1p())
                } else {
                    ((-v[2].exp()).ln_1p(), v[2])
                }
            })
            .unzip();
        Ok(Self {
            s_grid,
            rho_grid,
            ln_lambda: values.iter().map(|v| v[0]).collect(),
            ln_mu,
            ln_one_minus_mu,
            config,
            quad,
        })
    }

    /// The 200 × 50 grid over `s ∈ [-10, 10]`, `ρ ∈ [0, 6]`.
    pub fn default_grid() -> (Vec<f64>, Vec<f64>) {
        (linspace(-10.0, 10.0, 200), linspace(0.0, 6.0, 50))
    }

    pub fn build_default(config: ConeConfig, quad: QuadParams) -> Result<Self> {
        let (s, rho) = Self::default_grid();
        Self::build(s, rho, config, quad)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.s_grid.len(), self.rho_grid.len())
    }

    fn index(&self, i: usize, j: usize) -> usize {
        i * self.rho_grid.len() + j
    }

    pub fn lambda_value(&self, i: usize, j: usize) -> f64 {
        self.ln_lambda[self.index(i, j)].exp()
    }

    pub fn mu_value(&self, i: usize, j: usize) -> f64 {
        self.ln_mu[self.index(i, j)].exp()
    }

    pub fn one_minus_mu_value(&self, i: usize, j: usize) -> f64 {
        self.ln_one_minus_mu[self.index(i, j)].exp()
    }

    /// `(s, ρ, λ, μ)` in row-major order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        self.s_grid.iter().enumerate().flat_map(move |(i, &s)| {
            self.rho_grid
                .iter()
                .enumerate()
                .map(move |(j, &rho)| (s, rho, self.lambda_value(i, j), self.mu_value(i, j)))
        })
    }

    pub fn contains(&self, s: f64, rho: f64) -> bool {
        hull_clamp(&self.s_grid, s).is_some() && hull_clamp(&self.rho_grid, rho).is_some()
    }

    pub fn interpolate_ln_lambda(&self, s: f64, rho: f64) -> Result<f64> {
        self.interpolate(&self.ln_lambda, s, rho)
    }

    pub fn interpolate_ln_mu(&self, s: f64, rho: f64) -> Result<f64> {
        self.interpolate(&self.ln_mu, s, rho)
    }

    pub fn interpolate_ln_one_minus_mu(&self, s: f64, rho: f64) -> Result<f64> {
        self.interpolate(&self.ln_one_minus_mu, s, rho)
    }

    pub fn interpolate_lambda(&self, s: f64, rho: f64) -> Result<f64> {
        self.interpolate_ln_lambda(s, rho).map(f64::exp)
    }

    pub fn interpolate_mu(&self, s: f64, rho: f64) -> Result<f64> {
        self.interpolate_ln_mu(s, rho).map(f64::exp)
    }

    fn interpolate(&self, values: &[f64], s: f64, rho: f64) -> Result<f64> {
        let (si, sw) = stencil(&self.s_grid, s)
            .ok_or_else(|| domain(format!("s = {s} outside table hull")))?;
        let (ri, rw) = stencil(&self.rho_grid, rho)
            .ok_or_else(|| domain(format!("rho = {rho} outside table hull")))?;
        let mut acc = 0.0;
        for (a, wa) in sw.iter().enumerate() {
            if *wa == 0.0 {
                continue;
            }
            let mut inner = 0.0;
            for (b, wb) in rw.iter().enumerate() {
                inner += wb * values[self.index(si + a, ri + b)];
            }
            acc += wa * inner;
        }
        Ok(acc)
    }
}

fn hull_clamp(grid: &[f64], x: f64) -> Option<f64> {
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let eps = 1e-12 * (hi - lo).abs().max(1.0);
    if !(x >= lo - eps && x <= hi + eps) {
        return None;
    }
    Some(x.clamp(lo, hi))
}

/// First index and weights of the interpolation stencil at `x`: a cubic
/// Lagrange stencil, shifted inward at the edges, or linear on grids with
/// fewer than four points.
fn stencil(grid: &[f64], x: f64) -> Option<(usize, Vec<f64>)> {
    let x = hull_clamp(grid, x)?;
    let n = grid.len();
    if n == 1 {
        return Some((0, vec![1.0]));
    }
    let i = grid.partition_point(|&g| g <= x).clamp(1, n - 1) - 1;
    if n < 4 {
        let t = (x - grid[i]) / (grid[i + 1] - grid[i]);
        return Some((i, vec![1.0 - t, t]));
    }
    let start = i.saturating_sub(1).min(n - 4);
    let nodes = &grid[start..start + 4];
    let weights = (0..4)
        .map(|j| {
            (0..4)
                .filter(|&k| k != j)
                .map(|k| (x - nodes[k]) / (nodes[j] - nodes[k]))
                .product()
        })
        .collect();
    Some((start, weights))
}
