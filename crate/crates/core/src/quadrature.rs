//! Quadrature rules: Gauss-Hermite nodes and an adaptive Gauss-Kronrod
//! integrator for smooth one-dimensional integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{config, Error, Result};

/// Gauss-Hermite rule for the weight `exp(-x²)` on the real line.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    /// Nodes in ascending order.
    pub nodes: Vec<f64>,
    /// Weights `w_i` such that `Σ w_i f(x_i) ≈ ∫ f(x) e^{-x²} dx`.
    pub weights: Vec<f64>,
    /// `w_i · e^{x_i²}`, the weights for integrating `∫ g(x) dx` directly.
    /// Computed without forming `e^{x²}`, so they stay finite for large rules.
    pub scaled_weights: Vec<f64>,
}

impl GaussHermite {
    /// Builds the `n`-point rule (exact for polynomials of degree `2n-1`).
    ///
    /// Nodes start from the eigenvalues of the symmetric Jacobi matrix and
    /// are polished by Newton steps on the orthonormal Hermite functions;
    /// weights follow from `w_i e^{x_i²} = 1 / (n h_{n-1}(x_i)²)`, which
    /// avoids the overflow of the raw polynomials.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(config("Gauss-Hermite rule needs at least one node"));
        }
        let nf = n as f64;
        let jacobi = DMatrix::from_fn(n, n, |i, j| {
            if i + 1 == j || j + 1 == i {
                (i.max(j) as f64 / 2.0).sqrt()
            } else {
                0.0
            }
        });
        let mut nodes: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
        nodes.sort_by(f64::total_cmp);
        for z in nodes.iter_mut() {
            for _ in 0..4 {
                let (hn, hn1) = hermite_function_pair(n, *z);
                let step = hn / ((2.0 * nf).sqrt() * hn1);
                if !step.is_finite() {
                    break;
                }
                *z -= step;
                if step.abs() <= 1e-16 * z.abs().max(1.0) {
                    break;
                }
            }
        }
        // exact symmetry about the origin
        for i in 0..n / 2 {
            let m = 0.5 * (nodes[n - 1 - i] - nodes[i]);
            nodes[i] = -m;
            nodes[n - 1 - i] = m;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Consistency(format!(
                "Gauss-Hermite nodes for n = {n} are not distinct"
            )));
        }
        let scaled_weights: Vec<f64> = nodes
            .iter()
            .map(|&x| {
                let (_, hn1) = hermite_function_pair(n, x);
                1.0 / (nf * hn1 * hn1)
            })
            .collect();
        let weights = nodes
            .iter()
            .zip(&scaled_weights)
            .map(|(x, ws)| ws * (-x * x).exp())
            .collect();
        Ok(Self {
            nodes,
            weights,
            scaled_weights,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Returns `(h_n(x), h_{n-1}(x))` for the L²-orthonormal Hermite functions.
fn hermite_function_pair(n: usize, x: f64) -> (f64, f64) {
    let mut h_prev = 0.0;
    let mut h = PI.powf(-0.25) * (-0.5 * x * x).exp();
    for j in 1..=n {
        let jf = j as f64;
        let next = (2.0 / jf).sqrt() * x * h - ((jf - 1.0) / jf).sqrt() * h_prev;
        h_prev = h;
        h = next;
    }
    (h, h_prev)
}

/// Evaluates the orthonormal Hermite functions `h_0..h_{count-1}` at `x`.
///
/// `h_0(x) = π^{-1/4} e^{-x²/2}`, `h_{k+1} = sqrt(2/(k+1)) x h_k - sqrt(k/(k+1)) h_{k-1}`.
pub fn hermite_functions(count: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if count == 1 {
        return out;
    }
    out.push(2.0_f64.sqrt() * x * out[0]);
    for k in 1..count - 1 {
        let kf = k as f64;
        let next =
            (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptive 15-point Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// `breakpoints` inside `(a, b)` seed the initial partition. Bisects the
/// segment with the largest error until the total error is below
/// `max(abs_tol, rel_tol·|value|)` or `max_subdivisions` bisections are spent.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_subdivisions: usize,
) -> std::result::Result<Estimate, Estimate> {
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in edges.windows(2) {
        let (value, error) = gk15(&f, w[0], w[1]);
        total += value;
        total_err += error;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }

    let mut subdivisions = 0;
    loop {
        let target = abs_tol.max(rel_tol * total.abs());
        if total_err <= target {
            return Ok(Estimate {
                value: total,
                error: total_err,
                subdivisions,
            });
        }
        if subdivisions >= max_subdivisions {
            return Err(Estimate {
                value: total,
                error: total_err,
                subdivisions,
            });
        }
        let worst = heap.pop().expect("partition is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gk15(&f, worst.a, mid);
        let (rv, re) = gk15(&f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
        subdivisions += 1;
        // Guard against drift of the running sums.
        if subdivisions % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_hermite_weights_sum_to_sqrt_pi() {
        for n in [1, 2, 5, 12, 32, 64, 160, 240] {
            let gh = GaussHermite::new(n).unwrap();
            let sum: f64 = gh.weights.iter().sum();
            assert!((sum - PI.sqrt()).abs() < 1e-13, "n={n}: {sum}");
            assert!(gh.nodes.windows(2).all(|w| w[0] < w[1]), "n={n} unsorted");
        }
    }

    #[test]
    fn gauss_hermite_integrates_monomials_exactly() {
        // ∫ x^{2k} e^{-x²} dx = Γ(k + 1/2)
        let gh = GaussHermite::new(10).unwrap();
        let mut gamma = PI.sqrt();
        for k in 0..10 {
            let q: f64 = gh
                .nodes
                .iter()
                .zip(&gh.weights)
                .map(|(x, w)| w * x.powi(2 * k))
                .sum();
            assert!(((q - gamma) / gamma).abs() < 1e-12, "k={k}");
            gamma *= k as f64 + 0.5;
        }
    }

    #[test]
    fn two_point_rule_matches_closed_form() {
        let gh = GaussHermite::new(2).unwrap();
        let x = 0.5_f64.sqrt();
        assert!((gh.nodes[1] - x).abs() < 1e-15);
        assert!((gh.weights[0] - PI.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn hermite_functions_are_orthonormal() {
        let gh = GaussHermite::new(40).unwrap();
        let rows: Vec<Vec<f64>> = gh.nodes.iter().map(|&x| hermite_functions(20, x)).collect();
        for j in 0..20 {
            for k in 0..20 {
                let ip: f64 = rows
                    .iter()
                    .zip(&gh.scaled_weights)
                    .map(|(h, w)| w * h[j] * h[k])
                    .sum();
                let expected = if j == k { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-12, "({j},{k}) = {ip}");
            }
        }
    }

    #[test]
    fn adaptive_integrates_gaussian() {
        let est = integrate_adaptive(|x| (-x * x).exp(), -10.0, 10.0, &[0.0], 1e-12, 1e-300, 200)
            .unwrap();
        assert!((est.value - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn adaptive_reports_failure_on_budget_exhaustion() {
        let res = integrate_adaptive(|x: f64| x.abs().sqrt().recip(), 0.0, 1.0, &[], 1e-14, 0.0, 3);
        let est = res.unwrap_err();
        assert_eq!(est.subdivisions, 3);
    }
}
