//! Truncated Segal-Bargmann (Fock) space numerics.
//!
//! Phase-space symbols `k(q, p)` on `ℝ^{2n}` are attached to `ℂⁿ` through
//! `z = (q + i p)/√2`, the convention under which the Toeplitz operator of
//! `½Σ(q_j² + p_j²)` is `nI + Σ z_j ∂/∂z_j` and the symbol `z_j` acts as the
//! creation operator. The Gaussian measure is `dμ_n = π^{-n} e^{-|z|²} dv(z)`
//! and the orthonormal basis is `e_α = z^α / √(α!)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{config, domain, Result};
use crate::quadrature::{hermite_functions, GaussHermite};

/// Upper bound on the number of complex variables accepted by [`build_basis`].
pub const MAX_DIMENSION: usize = 8;
/// Upper bound on the number of basis elements.
pub const MAX_BASIS_SIZE: usize = 5000;
const MAX_QUADRATURE_POINTS: f64 = 5e7;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `α! = Π α_j!`
    pub fn factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&a| (1..=a).map(f64::from).product::<f64>())
            .product()
    }
}

/// Normalized monomials `z^α/√α!` with `|α| ≤ degree_cap`, ordered by total
/// degree and then lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    pub n: usize,
    pub degree_cap: u32,
    pub indices: Vec<MultiIndex>,
}

impl FockBasis {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.indices.iter().position(|a| a == alpha)
    }

    /// Values of all basis functions at `z`.
    fn evaluate(&self, z: &[Complex64], norms: &[f64]) -> Vec<Complex64> {
        // powers[j][k] = z_j^k
        let cap = self.degree_cap as usize;
        let powers: Vec<Vec<Complex64>> = z
            .iter()
            .map(|&zj| {
                let mut v = Vec::with_capacity(cap + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..=cap {
                    v.push(acc);
                    acc *= zj;
                }
                v
            })
            .collect();
        self.indices
            .iter()
            .zip(norms)
            .map(|(alpha, &norm)| {
                alpha
                    .0
                    .iter()
                    .enumerate()
                    .fold(Complex64::new(norm, 0.0), |acc, (j, &a)| {
                        acc * powers[j][a as usize]
                    })
            })
            .collect()
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (1..=k).fold(1usize, |acc, i| acc * (n - k + i) / i)
}

pub fn build_basis(n: usize, degree_cap: u32) -> Result<FockBasis> {
    if n == 0 || n > MAX_DIMENSION {
        return Err(domain(format!(
            "number of complex variables {n} outside 1..={MAX_DIMENSION}"
        )));
    }
    let count = binomial(n + degree_cap as usize, n);
    if count > MAX_BASIS_SIZE {
        return Err(domain(format!(
            "basis with n = {n}, cap = {degree_cap} has {count} elements (limit {MAX_BASIS_SIZE})"
        )));
    }
    let mut indices = Vec::with_capacity(count);
    let mut current = vec![0u32; n];
    enumerate(&mut current, 0, degree_cap, &mut indices);
    indices.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then(a.cmp(b)));
    debug_assert_eq!(indices.len(), count);
    Ok(FockBasis {
        n,
        degree_cap,
        indices,
    })
}

fn enumerate(current: &mut Vec<u32>, pos: usize, budget: u32, out: &mut Vec<MultiIndex>) {
    if pos == current.len() {
        out.push(MultiIndex(current.clone()));
        return;
    }
    for a in 0..=budget {
        current[pos] = a;
        enumerate(current, pos + 1, budget - a, out);
    }
    current[pos] = 0;
}

/// One term `coef · Π q_j^{q_pows[j]} p_j^{p_pows[j]}` of a phase-space symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coef: f64,
    pub q_pows: Vec<u32>,
    pub p_pows: Vec<u32>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.q_pows.iter().chain(&self.p_pows).sum()
    }

    /// Largest exponent of any single variable.
    pub fn axis_degree(&self) -> u32 {
        self.q_pows.iter().chain(&self.p_pows).copied().max().unwrap_or(0)
    }
}

/// Real polynomial symbol `k(q, p)` on `ℝ^{2n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySymbol {
    pub n: usize,
    pub terms: Vec<Monomial>,
}

impl PolySymbol {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: vec![] }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self {
            n,
            terms: vec![Monomial {
                coef: c,
                q_pows: vec![0; n],
                p_pows: vec![0; n],
            }],
        }
    }

    /// `coef · q^{q_pows} p^{p_pows}`.
    pub fn monomial(coef: f64, q_pows: Vec<u32>, p_pows: Vec<u32>) -> Result<Self> {
        if q_pows.len() != p_pows.len() || q_pows.is_empty() {
            return Err(domain("q and p exponent vectors must have equal nonzero length"));
        }
        Ok(Self {
            n: q_pows.len(),
            terms: vec![Monomial {
                coef,
                q_pows,
                p_pows,
            }],
        })
    }

    /// Coordinate `q_j` (0-based `j`).
    pub fn q(n: usize, j: usize) -> Self {
        let mut q_pows = vec![0; n];
        q_pows[j] = 1;
        Self {
            n,
            terms: vec![Monomial {
                coef: 1.0,
                q_pows,
                p_pows: vec![0; n],
            }],
        }
    }

    /// Momentum `p_j` (0-based `j`).
    pub fn p(n: usize, j: usize) -> Self {
        let mut p_pows = vec![0; n];
        p_pows[j] = 1;
        Self {
            n,
            terms: vec![Monomial {
                coef: 1.0,
                q_pows: vec![0; n],
                p_pows,
            }],
        }
    }

    /// `H(q, p) = ½ Σ_j (q_j² + p_j²)`.
    pub fn harmonic_oscillator(n: usize) -> Self {
        let mut terms = Vec::with_capacity(2 * n);
        for j in 0..n {
            let mut sq = vec![0; n];
            sq[j] = 2;
            terms.push(Monomial {
                coef: 0.5,
                q_pows: sq.clone(),
                p_pows: vec![0; n],
            });
            terms.push(Monomial {
                coef: 0.5,
                q_pows: vec![0; n],
                p_pows: sq,
            });
        }
        Self { n, terms }
    }

    pub fn plus(mut self, other: Self) -> Result<Self> {
        if self.n != other.n {
            return Err(domain("symbols live on different phase spaces"));
        }
        self.terms.extend(other.terms);
        Ok(self)
    }

    pub fn scaled(mut self, k: f64) -> Self {
        for t in &mut self.terms {
            t.coef *= k;
        }
        self
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn axis_degree(&self) -> u32 {
        self.terms.iter().map(Monomial::axis_degree).max().unwrap_or(0)
    }

    pub fn evaluate(&self, q: &[f64], p: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let qs: f64 = q.iter().zip(&t.q_pows).map(|(x, &e)| x.powi(e as i32)).product();
                let ps: f64 = p.iter().zip(&t.p_pows).map(|(x, &e)| x.powi(e as i32)).product();
                t.coef * qs * ps
            })
            .sum()
    }
}

/// Tensor-product Gauss-Hermite rule over `ℝ^{2n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub nodes_per_axis: usize,
}

impl QuadratureSpec {
    /// Smallest rule that integrates `k · conj(e_α) e_β` exactly.
    pub fn exact_for(symbol: &PolySymbol, basis: &FockBasis) -> Self {
        let degree = symbol.axis_degree() as usize + 2 * basis.degree_cap as usize;
        Self {
            nodes_per_axis: (degree / 2 + 1).max(basis.degree_cap as usize + 2),
        }
    }
}

/// Matrix of the Berezin-Toeplitz operator `T_k = P_Q k I` on a truncated basis.
#[derive(Debug, Clone)]
pub struct ToeplitzMatrix {
    pub basis: FockBasis,
    /// `entries[(α, β)] = ⟨e_α, T_k e_β⟩`.
    pub entries: DMatrix<Complex64>,
}

impl ToeplitzMatrix {
    pub fn hermitian_defect(&self) -> f64 {
        let m = &self.entries;
        let mut worst = 0.0_f64;
        for i in 0..m.nrows() {
            for j in 0..=i {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order (the matrix is Hermitian).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.entries.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Largest entrywise deviation from `target`.
    pub fn max_abs_diff(&self, target: &DMatrix<Complex64>) -> f64 {
        (&self.entries - target).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

pub fn toeplitz_matrix(
    symbol: &PolySymbol,
    basis: &FockBasis,
    quad: QuadratureSpec,
) -> Result<ToeplitzMatrix> {
    if symbol.n != basis.n {
        return Err(domain(format!(
            "symbol on ℝ^{} does not match basis on ℂ^{}",
            2 * symbol.n,
            basis.n
        )));
    }
    let needed = symbol.axis_degree() as usize + 2 * basis.degree_cap as usize;
    let nodes = quad.nodes_per_axis;
    if nodes < basis.degree_cap as usize + 2 || 2 * nodes < needed + 1 {
        return Err(config(format!(
            "{nodes} Gauss-Hermite nodes per axis cannot integrate degree {needed} exactly"
        )));
    }
    let total_points = (nodes as f64).powi(2 * basis.n as i32);
    if total_points > MAX_QUADRATURE_POINTS {
        return Err(config(format!(
            "tensor rule would need {total_points:e} points"
        )));
    }
    let gh = GaussHermite::new(nodes)?;
    let n = basis.n;
    let dim = basis.len();
    let norms: Vec<f64> = basis.indices.iter().map(|a| a.factorial().sqrt().recip()).collect();
    let mut entries = DMatrix::<Complex64>::zeros(dim, dim);

    let axes = 2 * n;
    let mut idx = vec![0usize; axes];
    let sqrt2 = 2.0_f64.sqrt();
    let prefactor = PI.powi(-(n as i32));
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    let mut q = vec![0.0; n];
    let mut p = vec![0.0; n];
    loop {
        let mut w = prefactor;
        for j in 0..n {
            let (t, u) = (gh.nodes[idx[j]], gh.nodes[idx[n + j]]);
            w *= gh.weights[idx[j]] * gh.weights[idx[n + j]];
            z[j] = Complex64::new(t, u);
            q[j] = sqrt2 * t;
            p[j] = sqrt2 * u;
        }
        let k = symbol.evaluate(&q, &p);
        if k != 0.0 {
            let v = basis.evaluate(&z, &norms);
            let scale = w * k;
            for b in 0..dim {
                let vb = v[b] * scale;
                for a in 0..dim {
                    entries[(a, b)] += v[a].conj() * vb;
                }
            }
        }
        // odometer over the tensor grid
        let mut axis = 0;
        loop {
            if axis == axes {
                return Ok(ToeplitzMatrix {
                    basis: basis.clone(),
                    entries,
                });
            }
            idx[axis] += 1;
            if idx[axis] < nodes {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }
}

/// Gram matrix of the basis under `dμ_n`, i.e. the Toeplitz matrix of `1`.
pub fn gram_matrix(basis: &FockBasis) -> Result<ToeplitzMatrix> {
    let one = PolySymbol::constant(basis.n, 1.0);
    toeplitz_matrix(&one, basis, QuadratureSpec::exact_for(&one, basis))
}

/// Diagonal matrix `diag(n + |α|)`, the oscillator's exact quantization.
pub fn oscillator_spectrum(basis: &FockBasis) -> DMatrix<Complex64> {
    DMatrix::from_fn(basis.len(), basis.len(), |i, j| {
        if i == j {
            Complex64::new((basis.n as u32 + basis.indices[i].total_degree()) as f64, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Max absolute deviation of `T_H`, `H = ½Σ(q²+p²)`, from `diag(n + |α|)`.
pub fn harmonic_oscillator_check(n: usize, cap: u32) -> Result<f64> {
    let basis = build_basis(n, cap)?;
    let h = PolySymbol::harmonic_oscillator(n);
    let t = toeplitz_matrix(&h, &basis, QuadratureSpec::exact_for(&h, &basis))?;
    Ok(t.max_abs_diff(&oscillator_spectrum(&basis)))
}

/// Matrix of multiplication by `z_j` on the truncated basis:
/// `√(β_j + 1)` at `(β + e_j, β)`.
pub fn creation_matrix(basis: &FockBasis, j: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(basis.len(), basis.len());
    for (col, beta) in basis.indices.iter().enumerate() {
        let mut raised = beta.clone();
        raised.0[j] += 1;
        if let Some(row) = basis.position(&raised) {
            m[(row, col)] = Complex64::new(f64::from(beta.0[j] + 1).sqrt(), 0.0);
        }
    }
    m
}

/// Sends `Σ c_k z^k/√k!` to `Σ c_k h_k(x)` sampled on `x_grid`, where `h_k`
/// are the L²-orthonormal Hermite functions.
pub fn bargmann_synthesis_1d(
    basis: &FockBasis,
    coeffs: &[Complex64],
    x_grid: &[f64],
) -> Result<Vec<Complex64>> {
    if basis.n != 1 {
        return Err(domain("one-dimensional synthesis needs a basis with n = 1"));
    }
    if coeffs.len() != basis.len() {
        return Err(domain(format!(
            "{} coefficients for a basis of size {}",
            coeffs.len(),
            basis.len()
        )));
    }
    Ok(x_grid
        .iter()
        .map(|&x| {
            hermite_functions(coeffs.len(), x)
                .iter()
                .zip(coeffs)
                .map(|(h, c)| c * *h)
                .sum()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn basis_enumeration() {
        let b = build_basis(1, 2).unwrap();
        let got: Vec<_> = b.indices.iter().map(|a| a.0.clone()).collect();
        assert_eq!(got, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(build_basis(4, 1).unwrap().len(), 5);
        let b2 = build_basis(2, 2).unwrap();
        let got: Vec<_> = b2.indices.iter().map(|a| a.0.clone()).collect();
        assert_eq!(
            got,
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]]
        );
    }

    #[test]
    fn basis_range_errors() {
        assert!(build_basis(0, 3).is_err());
        assert!(build_basis(MAX_DIMENSION + 1, 1).is_err());
        assert!(build_basis(8, 20).is_err());
    }

    #[test]
    fn count_matches_binomial() {
        for n in 1..=4 {
            for cap in 0..=5 {
                assert_eq!(build_basis(n, cap).unwrap().len(), binomial(n + cap as usize, n));
            }
        }
    }

    #[test]
    fn gram_is_identity() {
        for (n, cap) in [(1, 4), (2, 3), (3, 2)] {
            let basis = build_basis(n, cap).unwrap();
            let g = gram_matrix(&basis).unwrap();
            let id = DMatrix::<Complex64>::identity(basis.len(), basis.len());
            assert!(g.max_abs_diff(&id) < 1e-10, "n={n} cap={cap}");
        }
    }

    #[test]
    fn oscillator_examples() {
        let b = build_basis(1, 3).unwrap();
        let h = PolySymbol::harmonic_oscillator(1);
        let t = toeplitz_matrix(&h, &b, QuadratureSpec::exact_for(&h, &b)).unwrap();
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1.0),
            c(2.0),
            c(3.0),
            c(4.0),
        ]));
        assert!(t.max_abs_diff(&diag) < 1e-10);

        let b = build_basis(2, 1).unwrap();
        let h = PolySymbol::harmonic_oscillator(2);
        let t = toeplitz_matrix(&h, &b, QuadratureSpec::exact_for(&h, &b)).unwrap();
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(2.0),
            c(3.0),
            c(3.0),
        ]));
        assert!(t.max_abs_diff(&diag) < 1e-10);
    }

    #[test]
    fn oscillator_check_values() {
        assert!(harmonic_oscillator_check(1, 5).unwrap() <= 1e-8);
        assert!(harmonic_oscillator_check(2, 3).unwrap() <= 1e-8);
        assert!(harmonic_oscillator_check(1, 0).unwrap() <= 1e-10);
    }

    #[test]
    fn under_resolved_quadrature_is_rejected() {
        let b = build_basis(1, 4).unwrap();
        let h = PolySymbol::harmonic_oscillator(1);
        let err = toeplitz_matrix(&h, &b, QuadratureSpec { nodes_per_axis: 4 }).unwrap_err();
        assert!(matches!(err, crate::Error::Config(_)));
    }

    #[test]
    fn mismatched_symbol_dimension() {
        let b = build_basis(2, 1).unwrap();
        let h = PolySymbol::harmonic_oscillator(1);
        assert!(toeplitz_matrix(&h, &b, QuadratureSpec { nodes_per_axis: 8 }).is_err());
    }

    #[test]
    fn z_symbol_is_creation_operator() {
        // z_1 = (q_1 + i p_1)/√2, assembled from the two real symbols
        for (n, cap) in [(1, 5), (2, 3)] {
            let basis = build_basis(n, cap).unwrap();
            let tq = toeplitz_matrix(&PolySymbol::q(n, 0), &basis, QuadratureSpec::exact_for(&PolySymbol::q(n, 0), &basis)).unwrap();
            let tp = toeplitz_matrix(&PolySymbol::p(n, 0), &basis, QuadratureSpec::exact_for(&PolySymbol::p(n, 0), &basis)).unwrap();
            let tz = (&tq.entries + &tp.entries * Complex64::new(0.0, 1.0)) / c(2.0_f64.sqrt());
            let dev = (&tz - creation_matrix(&basis, 0)).iter().map(|x| x.norm()).fold(0.0, f64::max);
            assert!(dev < 1e-10, "n={n} cap={cap}: {dev}");
        }
    }

    #[test]
    fn synthesis_ground_state_is_gaussian() {
        let basis = build_basis(1, 3).unwrap();
        let mut coeffs = vec![c(0.0); 4];
        coeffs[0] = c(1.0);
        let xs = [-2.0, -0.5, 0.0, 1.3];
        let out = bargmann_synthesis_1d(&basis, &coeffs, &xs).unwrap();
        for (x, v) in xs.iter().zip(out) {
            let g = PI.powf(-0.25) * (-x * x / 2.0).exp();
            assert!((v.re - g).abs() < 1e-15 && v.im == 0.0);
        }
    }

    #[test]
    fn synthesis_validates_input() {
        let basis = build_basis(1, 3).unwrap();
        assert!(bargmann_synthesis_1d(&basis, &[c(1.0)], &[0.0]).is_err());
        let b2 = build_basis(2, 1).unwrap();
        assert!(bargmann_synthesis_1d(&b2, &[c(1.0); 3], &[0.0]).is_err());
    }
}
