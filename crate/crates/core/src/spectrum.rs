//! Numerical spectrum of `(P_Q - P_R)²` compressed to the Fock space.
//!
//! On `Im P_Q` the compression is `P_Q - P_Q P_R P_Q`, which the Bargmann
//! isometry carries to multiplication by `1 - μ(ξ)`. Its spectrum is the
//! closure of the range of `1 - μ`, probed here two ways: directly from the
//! tabulated values, and through Galerkin finite sections on Hermite
//! functions along a fixed-`ρ` slice.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::algebra::{classify_spin, SpinClass, SpinParameter};
use crate::bargmann::QuadratureSpec;
use crate::cone_symbol::{ln_one_minus_mu_reduced, RadialTable};
use crate::error::{config, domain, Error, Result};
use crate::quadrature::{hermite_functions, GaussHermite};

pub const DEFAULT_BINS: usize = 64;
/// Allowed excursion of finite-section eigenvalues beyond `[0, 1]`.
pub const EIGENVALUE_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub observed_min: f64,
    pub observed_max: f64,
    /// Counts of sampled `1 - μ` values in equal bins over `[0, 1]`.
    pub coverage_histogram: Vec<usize>,
    /// Largest subinterval of `[0, 1]` containing no sampled value.
    pub max_gap: f64,
    pub samples: usize,
}

impl SpectrumReport {
    pub fn empty_bins(&self) -> usize {
        self.coverage_histogram.iter().filter(|&&c| c == 0).count()
    }
}

pub fn spectrum_range(table: &RadialTable) -> Result<SpectrumReport> {
    spectrum_range_with_bins(table, DEFAULT_BINS)
}

pub fn spectrum_range_with_bins(table: &RadialTable, bins: usize) -> Result<SpectrumReport> {
    if bins == 0 {
        return Err(config("histogram needs at least one bin"));
    }
    let (lo, hi) = (table.s_grid[0], table.s_grid[table.s_grid.len() - 1]);
    if lo > -10.0 + 1e-9 || hi < 10.0 - 1e-9 {
        return Err(config(format!(
            "table spans s ∈ [{lo}, {hi}]; at least [-10, 10] is required"
        )));
    }
    let mut values: Vec<f64> = table.ln_one_minus_mu.iter().map(|&l| l.exp()).collect();
    values.sort_by(f64::total_cmp);
    let mut histogram = vec![0usize; bins];
    for &v in &values {
        let k = ((v * bins as f64) as usize).min(bins - 1);
        histogram[k] += 1;
    }
    let mut max_gap = values[0];
    for w in values.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    max_gap = max_gap.max(1.0 - values[values.len() - 1]);
    Ok(SpectrumReport {
        observed_min: values[0],
        observed_max: values[values.len() - 1],
        coverage_histogram: histogram,
        max_gap,
        samples: values.len(),
    })
}

/// Galerkin compression of multiplication by `1 - μ(·, ρ₀)` onto the first
/// `size` Hermite functions in the `s` variable.
#[derive(Debug, Clone)]
pub struct FiniteSection {
    pub size: usize,
    pub rho0: f64,
    pub matrix: DMatrix<f64>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
}

impl FiniteSection {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }
}

/// Quadrature size used for finite sections up to `max_size`.
pub fn finite_section_quadrature(max_size: usize) -> QuadratureSpec {
    QuadratureSpec {
        nodes_per_axis: 2 * max_size + 32,
    }
}

/// Builds the finite section. `1 - μ` is interpolated from the table inside
/// its hull and evaluated directly outside it (Hermite functions of high
/// order reach beyond the usual `s ∈ [-10, 10]` table).
///
/// Sections of different size built with the same `quad` are exact
/// principal submatrices of one another.
pub fn finite_section(
    size: usize,
    rho0: f64,
    table: &RadialTable,
    quad: QuadratureSpec,
) -> Result<FiniteSection> {
    if size < 2 {
        return Err(domain(format!("finite section size {size} < 2")));
    }
    if quad.nodes_per_axis < 2 * size {
        return Err(config(format!(
            "{} quadrature nodes under-resolve a section of size {size} (need ≥ {})",
            quad.nodes_per_axis,
            2 * size
        )));
    }
    if !(rho0 >= 0.0 && rho0.is_finite()) {
        return Err(domain(format!("slice radius {rho0} must be finite and ≥ 0")));
    }
    let gh = GaussHermite::new(quad.nodes_per_axis)?;
    let symbol: Vec<f64> = gh
        .nodes
        .iter()
        .map(|&s| {
            let ln_g = if table.contains(s, rho0) {
                table.interpolate_ln_one_minus_mu(s, rho0)?
            } else {
                ln_one_minus_mu_reduced(s, rho0, &table.config, &table.quad)?
            };
            // Interpolation may overshoot a log-probability slightly past 0.
            Ok(ln_g.min(0.0).exp())
        })
        .collect::<Result<_>>()?;

    let basis: Vec<Vec<f64>> = gh.nodes.iter().map(|&x| hermite_functions(size, x)).collect();
    let mut matrix = DMatrix::<f64>::zeros(size, size);
    for ((h, w), g) in basis.iter().zip(&gh.scaled_weights).zip(&symbol) {
        let wg = w * g;
        for j in 0..size {
            let a = wg * h[j];
            for k in 0..=j {
                matrix[(j, k)] += a * h[k];
            }
        }
    }
    for j in 0..size {
        for k in 0..j {
            matrix[(k, j)] = matrix[(j, k)];
        }
    }
    let mut eigenvalues: Vec<f64> = matrix.clone().symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let (lo, hi) = (eigenvalues[0], eigenvalues[size - 1]);
    if lo < -EIGENVALUE_SLACK || hi > 1.0 + EIGENVALUE_SLACK {
        return Err(Error::Consistency(format!(
            "finite section eigenvalues [{lo:e}, {hi:e}] leave [0, 1]"
        )));
    }
    Ok(FiniteSection {
        size,
        rho0,
        matrix,
        eigenvalues,
    })
}

/// Reads a spectral value as the spin parameter `p`.
pub fn spin_from_spectral_value(v: f64) -> Result<SpinClass> {
    Ok(classify_spin(SpinParameter::new(v)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::SpinKind;

    #[test]
    fn spectral_values_map_to_spin() {
        assert_eq!(spin_from_spectral_value(0.0).unwrap().kind, SpinKind::Scalar);
        assert_eq!(spin_from_spectral_value(0.37).unwrap().kind, SpinKind::Spinor);
        assert_eq!(spin_from_spectral_value(1.0).unwrap().kind, SpinKind::Vector);
        assert!(matches!(spin_from_spectral_value(1.2), Err(Error::Domain(_))));
        assert!(spin_from_spectral_value(-0.1).is_err());
    }

    fn coarse_table() -> RadialTable {
        use crate::cone_symbol::{linspace, ConeConfig, QuadParams};
        RadialTable::build(
            linspace(-10.0, 10.0, 41),
            linspace(0.0, 3.0, 7),
            ConeConfig::default(),
            QuadParams::default(),
        )
        .unwrap()
    }

    #[test]
    fn range_report_on_coarse_table() {
        let table = coarse_table();
        let rep = spectrum_range(&table).unwrap();
        assert_eq!(rep.samples, 41 * 7);
        assert_eq!(rep.coverage_histogram.iter().sum::<usize>(), rep.samples);
        assert!(rep.observed_min < 1e-3 && rep.observed_max > 0.999);
        assert!(rep.max_gap > 0.0 && rep.max_gap < 1.0);
        assert!(spectrum_range_with_bins(&table, 0).is_err());
    }

    #[test]
    fn range_needs_full_s_span() {
        use crate::cone_symbol::{linspace, ConeConfig, QuadParams};
        let short = RadialTable::build(
            linspace(-2.0, 2.0, 5),
            vec![0.0],
            ConeConfig::default(),
            QuadParams::default(),
        )
        .unwrap();
        assert!(matches!(spectrum_range(&short), Err(Error::Config(_))));
    }

    #[test]
    fn sections_are_nested() {
        let table = coarse_table();
        let quad = finite_section_quadrature(12);
        let small = finite_section(5, 0.0, &table, quad).unwrap();
        let big = finite_section(12, 0.0, &table, quad).unwrap();
        let corner = big.matrix.view((0, 0), (5, 5));
        assert!((corner - &small.matrix).amax() < 1e-14);
        // Cauchy interlacing for a principal submatrix.
        assert!(big.min_eigenvalue() <= small.min_eigenvalue() + 1e-14);
        assert!(big.max_eigenvalue() >= small.max_eigenvalue() - 1e-14);
    }

    #[test]
    fn section_preconditions() {
        let table = coarse_table();
        let quad = QuadratureSpec { nodes_per_axis: 10 };
        assert!(matches!(finite_section(8, 0.0, &table, quad), Err(Error::Config(_))));
        assert!(finite_section(1, 0.0, &table, quad).is_err());
        assert!(finite_section(4, -1.0, &table, quad).is_err());
    }
}
