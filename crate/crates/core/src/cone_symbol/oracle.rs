//! Brute-force four-dimensional evaluation of `λ`, independent of the
//! radial reduction.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{config, Result};
use crate::quadrature::GaussHermite;

use super::{chi_cone, minkowski_q, ConeConfig, FourMomentum};

pub const MIN_MONTE_CARLO_SAMPLES: usize = 100_000;
pub const MIN_TENSOR_NODES: usize = 24;
const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    /// Seeded Monte-Carlo with `x ~ N(0, I/2)`.
    MonteCarlo { samples: usize, seed: u64 },
    /// Tensor-product Gauss-Hermite with `nodes` per axis.
    TensorGrid { nodes: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleEstimate {
    pub value: f64,
    /// Standard error (Monte-Carlo) or difference to a coarser rule (tensor grid).
    pub error_estimate: f64,
}

fn integrand(xi: &FourMomentum, x: [f64; 4], cfg: &ConeConfig) -> f64 {
    let y = FourMomentum([xi.0[0] + x[0], xi.0[1] + x[1], xi.0[2] + x[2], xi.0[3] + x[3]]);
    if chi_cone(&y, cfg) == 1 {
        minkowski_q(&y)
    } else {
        0.0
    }
}

/// `(1/(4mcπ²)) ∫ χ_V(ξ+x) q(ξ+x) e^{-|x|²} d⁴x` evaluated directly in four
/// dimensions.
pub fn lambda_oracle(
    xi: &FourMomentum,
    cfg: &ConeConfig,
    method: OracleMethod,
) -> Result<OracleEstimate> {
    cfg.validate()?;
    let norm = 1.0 / (4.0 * cfg.mass * cfg.c);
    match method {
        OracleMethod::MonteCarlo { samples, seed } => {
            if samples < MIN_MONTE_CARLO_SAMPLES {
                return Err(config(format!(
                    "Monte-Carlo oracle needs at least {MIN_MONTE_CARLO_SAMPLES} samples, got {samples}"
                )));
            }
            let (mean, var) = monte_carlo_moments(xi, cfg, samples, seed);
            Ok(OracleEstimate {
                value: norm * mean,
                error_estimate: norm * (var / samples as f64).sqrt(),
            })
        }
        OracleMethod::TensorGrid { nodes } => {
            if nodes < MIN_TENSOR_NODES {
                return Err(config(format!(
                    "tensor-grid oracle needs at least {MIN_TENSOR_NODES} nodes per axis, got {nodes}"
                )));
            }
            let fine = tensor_sum(xi, cfg, nodes)?;
            let coarse = tensor_sum(xi, cfg, (3 * nodes).div_ceil(4))?;
            Ok(OracleEstimate {
                value: norm * fine,
                error_estimate: norm * (fine - coarse).abs(),
            })
        }
    }
}

/// Sample mean and variance of `χ q` under `x ~ N(0, I/2)`.
///
/// Samples are drawn in fixed-size chunks, each from its own ChaCha stream,
/// and merged in chunk order, so results do not depend on the thread count.
fn monte_carlo_moments(xi: &FourMomentum, cfg: &ConeConfig, samples: usize, seed: u64) -> (f64, f64) {
    let chunks = samples.div_ceil(CHUNK);
    let scale = 0.5_f64.sqrt();
    let partial: Vec<(usize, f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let count = CHUNK.min(samples - k * CHUNK);
            let mut mean = 0.0;
            let mut m2 = 0.0;
            for i in 0..count {
                let x: [f64; 4] = std::array::from_fn(|_| scale * rng.sample::<f64, _>(StandardNormal));
                let v = integrand(xi, x, cfg);
                let delta = v - mean;
                mean += delta / (i + 1) as f64;
                m2 += delta * (v - mean);
            }
            (count, mean, m2)
        })
        .collect();
    // Chan et al. pairwise merge
    let (mut n, mut mean, mut m2) = (0usize, 0.0, 0.0);
    for (nb, mb, m2b) in partial {
        let total = n + nb;
        let delta = mb - mean;
        mean += delta * nb as f64 / total as f64;
        m2 += m2b + delta * delta * (n as f64) * (nb as f64) / total as f64;
        n = total;
    }
    (mean, m2 / (n - 1) as f64)
}

/// `π^{-2} Σ w_i w_j w_k w_l χ q` over the tensor Gauss-Hermite grid.
fn tensor_sum(xi: &FourMomentum, cfg: &ConeConfig, nodes: usize) -> Result<f64> {
    let gh = GaussHermite::new(nodes)?;
    let (x, w) = (&gh.nodes, &gh.weights);
    let rows: Vec<f64> = (0..nodes)
        .into_par_iter()
        .map(|i| {
            let mut acc = 0.0;
            for j in 0..nodes {
                for k in 0..nodes {
                    let wijk = w[i] * w[j] * w[k];
                    let mut inner = 0.0;
                    for l in 0..nodes {
                        inner += w[l] * integrand(xi, [x[i], x[j], x[k], x[l]], cfg);
                    }
                    acc += wijk * inner;
                }
            }
            acc
        })
        .collect();
    Ok(rows.iter().sum::<f64>() / (PI * PI))
}
