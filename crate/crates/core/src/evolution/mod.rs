//! Free evolution of momentum-space wave packets under `H = λ(ξ)`.
//!
//! The Hamiltonian is a multiplication operator in the momentum
//! representation, so `φ(τ, ξ) = e^{-iλ(ξ)τ/ħ} φ(0, ξ)` and the coordinate
//! picture is reached by a unitary Fourier transform with kernel `e^{iξ·x}`.
//! A packet centred at `ξ_c` then drifts with velocity `∇λ(ξ_c)/ħ`.
//!
//! Grids are either the reduced `(ξ₀, ξ₁)` plane, with `λ` read at
//! `(s, ρ) = (ξ₀, |ξ₁|)`, or the full four-dimensional momentum space.

mod fourier;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::cone_symbol::{
    chi_cone, lambda_reduced, minkowski_q, ConeConfig, FourMomentum, QuadParams, RadialTable,
};
use crate::error::{config, domain, Error, Result};
use crate::special::erfc;
use fourier::{transform, Direction};

/// Upper bound on the node count of a grid (`64⁴`).
pub const MAX_NODES: usize = 1 << 24;
/// Smallest packet width, in grid cells.
pub const MIN_WIDTH_CELLS: f64 = 4.0;
/// Largest probability mass a packet may lose to the finite grid.
pub const MAX_TRUNCATED_MASS: f64 = 1e-6;
/// Fraction of each position axis, at either end, treated as the wrap-around zone.
pub const EDGE_FRACTION: f64 = 0.05;

/// A periodic momentum grid with nodes `-L + i·2L/N` on each axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub dims: usize,
    pub points_per_axis: Vec<usize>,
    /// Symmetric `[min, max]` per axis.
    pub extents: Vec<[f64; 2]>,
}

impl GridSpec {
    pub fn new(points_per_axis: Vec<usize>, extents: Vec<[f64; 2]>) -> Result<Self> {
        let grid = Self {
            dims: points_per_axis.len(),
            points_per_axis,
            extents,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Same size and half-width `l` on every axis.
    pub fn uniform(dims: usize, points: usize, l: f64) -> Result<Self> {
        Self::new(vec![points; dims], vec![[-l, l]; dims])
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims != 2 && self.dims != 4 {
            return Err(config(format!("grid dimension {} is neither 2 nor 4", self.dims)));
        }
        if self.points_per_axis.len() != self.dims || self.extents.len() != self.dims {
            return Err(config("grid axes disagree with the declared dimension"));
        }
        for (&n, e) in self.points_per_axis.iter().zip(&self.extents) {
            if n < 2 || !n.is_power_of_two() {
                return Err(config(format!("{n} points per axis is not a power of two ≥ 2")));
            }
            if !(e[1] > 0.0 && e[1].is_finite()) || e[0] != -e[1] {
                return Err(config(format!("extent [{}, {}] is not symmetric about 0", e[0], e[1])));
            }
        }
        let total = self
            .points_per_axis
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .filter(|&t| t <= MAX_NODES);
        if total.is_none() {
            return Err(config(format!("grid exceeds {MAX_NODES} nodes")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        2.0 * self.extents[axis][1] / self.points_per_axis[axis] as f64
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dims).map(|a| self.spacing(a)).product()
    }

    /// Spacing of the dual position grid, `2π/(N dξ)`.
    pub fn position_spacing(&self, axis: usize) -> f64 {
        2.0 * PI / (self.points_per_axis[axis] as f64 * self.spacing(axis))
    }

    pub fn position_cell_volume(&self) -> f64 {
        (0..self.dims).map(|a| self.position_spacing(a)).product()
    }

    fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims];
        for a in (0..self.dims).rev() {
            let n = self.points_per_axis[a];
            idx[a] = flat % n;
            flat /= n;
        }
        idx
    }

    /// Momentum coordinates of node `flat`.
    pub fn coordinates(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .enumerate()
            .map(|(a, &i)| self.extents[a][0] + i as f64 * self.spacing(a))
            .collect()
    }

    /// Position coordinates `(i - N/2) dx` of node `flat` on the dual grid.
    pub fn position_coordinates(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .enumerate()
            .map(|(a, &i)| {
                (i as f64 - (self.points_per_axis[a] / 2) as f64) * self.position_spacing(a)
            })
            .collect()
    }

    /// Embeds grid coordinates in momentum space (zero-padded in 2D).
    pub fn momentum(&self, coords: &[f64]) -> FourMomentum {
        let mut xi = [0.0; 4];
        xi[..coords.len()].copy_from_slice(coords);
        FourMomentum(xi)
    }

    pub fn node_momentum(&self, flat: usize) -> FourMomentum {
        self.momentum(&self.coordinates(flat))
    }
}

/// Momentum-representation amplitudes with norm `(Σ |φ|² dξ^d)^{1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePacket {
    pub grid: GridSpec,
    pub amplitudes: Vec<Complex64>,
}

impl WavePacket {
    pub fn new(grid: GridSpec, amplitudes: Vec<Complex64>) -> Result<Self> {
        grid.validate()?;
        if amplitudes.len() != grid.len() {
            return Err(domain(format!(
                "{} amplitudes for a grid of {} nodes",
                amplitudes.len(),
                grid.len()
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(domain("non-finite amplitude"));
        }
        Ok(Self { grid, amplitudes })
    }

    pub fn norm(&self) -> f64 {
        (self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    /// `‖self - other‖` on a shared grid.
    pub fn distance(&self, other: &WavePacket) -> Result<f64> {
        if self.grid != other.grid {
            return Err(domain("packets live on different grids"));
        }
        let sq: f64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((sq * self.grid.cell_volume()).sqrt())
    }

    pub fn centroid_momentum(&self) -> Vec<f64> {
        weighted_centroid(&self.grid, &self.amplitudes, |k| self.grid.coordinates(k))
    }
}

fn weighted_centroid(
    grid: &GridSpec,
    values: &[Complex64],
    coords: impl Fn(usize) -> Vec<f64>,
) -> Vec<f64> {
    let mut acc = vec![0.0; grid.dims];
    let mut mass = 0.0;
    for (k, v) in values.iter().enumerate() {
        let w = v.norm_sqr();
        if w == 0.0 {
            continue;
        }
        mass += w;
        for (a, x) in coords(k).into_iter().enumerate() {
            acc[a] += w * x;
        }
    }
    acc.iter().map(|x| x / mass).collect()
}

/// `φ(ξ) ∝ exp(-Σ (ξ_a - c_a)²/(4σ_a²))`, so `|φ|²` has standard deviation
/// `σ_a` along axis `a`.
pub fn make_gaussian_packet(
    grid: &GridSpec,
    center: &FourMomentum,
    widths: &[f64],
) -> Result<WavePacket> {
    grid.validate()?;
    let d = grid.dims;
    if widths.len() != d {
        return Err(config(format!("{} widths for a {d}-dimensional grid", widths.len())));
    }
    if !center.is_finite() || center.0[d..].iter().any(|&x| x != 0.0) {
        return Err(domain("packet centre must be finite and lie in the grid's subspace"));
    }
    let c = &center.0[..d];
    let mut kept = 1.0;
    for a in 0..d {
        let (l, sigma) = (grid.extents[a][1], widths[a]);
        if !(c[a] > -l && c[a] < l) {
            return Err(domain(format!("centre component {} outside [-{l}, {l}]", c[a])));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(domain(format!("width {sigma} must be positive")));
        }
        if sigma < MIN_WIDTH_CELLS * grid.spacing(a) {
            return Err(config(format!(
                "width {sigma} spans fewer than {MIN_WIDTH_CELLS} cells of {}",
                grid.spacing(a)
            )));
        }
        let z = std::f64::consts::SQRT_2 * sigma;
        kept *= 1.0 - 0.5 * (erfc((l - c[a]) / z) + erfc((l + c[a]) / z));
    }
    if 1.0 - kept > MAX_TRUNCATED_MASS {
        return Err(config(format!(
            "grid truncates {:e} of the packet mass (limit {MAX_TRUNCATED_MASS:e})",
            1.0 - kept
        )));
    }
    let mut amplitudes: Vec<Complex64> = (0..grid.len())
        .map(|k| {
            let x = grid.coordinates(k);
            let e: f64 = (0..d)
                .map(|a| {
                    let u = (x[a] - c[a]) / widths[a];
                    -0.25 * u * u
                })
                .sum();
            Complex64::new(e.exp(), 0.0)
        })
        .collect();
    let n = (amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.cell_volume()).sqrt();
    amplitudes.iter_mut().for_each(|a| *a /= n);
    WavePacket::new(grid.clone(), amplitudes)
}

/// Source of the phase `λ(ξ)`.
#[derive(Debug, Clone, Copy)]
pub enum EvolutionSymbol<'a> {
    /// Interpolated from a cached table.
    Exact(&'a RadialTable),
    /// `λ` integrated afresh at every node.
    Direct(QuadParams),
    /// `χ(ξ) q(ξ)/(4mc)`, or `q(ξ)/(4mc)` when `cone_cutoff` is off.
    Approximation { cone_cutoff: bool },
}

#[derive(Debug, Clone, Copy)]
pub struct EvolutionConfig<'a> {
    pub symbol: EvolutionSymbol<'a>,
    pub tau: f64,
    pub cfg: ConeConfig,
}

/// The approximate symbol at `ξ`.
pub fn approximate_symbol(xi: &FourMomentum, cfg: &ConeConfig, cone_cutoff: bool) -> f64 {
    let chi = if cone_cutoff {
        f64::from(chi_cone(xi, cfg))
    } else {
        1.0
    };
    chi * minkowski_q(xi) / (4.0 * cfg.mass * cfg.c)
}

fn symbol_at(xi: &FourMomentum, symbol: EvolutionSymbol<'_>, cfg: &ConeConfig) -> Result<f64> {
    match symbol {
        EvolutionSymbol::Exact(table) => table
            .interpolate_lambda(xi.time(), xi.spatial_norm())
            .map_err(|e| match e {
                Error::Domain(m) => domain(format!("grid node outside the λ table: {m}")),
                other => other,
            }),
        EvolutionSymbol::Direct(qp) => lambda_reduced(xi.time(), xi.spatial_norm(), cfg, &qp),
        EvolutionSymbol::Approximation { cone_cutoff } => {
            Ok(approximate_symbol(xi, cfg, cone_cutoff))
        }
    }
}

/// `λ` (or its approximation) at every grid node.
pub fn symbol_values(
    grid: &GridSpec,
    symbol: EvolutionSymbol<'_>,
    cfg: &ConeConfig,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    if let EvolutionSymbol::Exact(table) = symbol {
        if table.config != *cfg {
            return Err(config("λ table was built for a different cone configuration"));
        }
    }
    (0..grid.len())
        .into_par_iter()
        .map(|k| symbol_at(&grid.node_momentum(k), symbol, cfg))
        .collect()
}

/// Multiplies by `e^{-iλτ/ħ}` given precomputed symbol values.
pub fn evolve_with_symbol(packet: &WavePacket, lambda: &[f64], tau: f64, hbar: f64) -> Result<WavePacket> {
    if !tau.is_finite() {
        return Err(domain(format!("proper time {tau} is not finite")));
    }
    if lambda.len() != packet.amplitudes.len() {
        return Err(domain("symbol values do not match the packet grid"));
    }
    let amplitudes = packet
        .amplitudes
        .par_iter()
        .zip(lambda.par_iter())
        .map(|(a, &l)| a * Complex64::from_polar(1.0, -l * tau / hbar))
        .collect();
    Ok(WavePacket {
        grid: packet.grid.clone(),
        amplitudes,
    })
}

pub fn evolve(packet: &WavePacket, ec: &EvolutionConfig<'_>) -> Result<WavePacket> {
    if !ec.tau.is_finite() {
        return Err(domain(format!("proper time {} is not finite", ec.tau)));
    }
    let lambda = symbol_values(&packet.grid, ec.symbol, &ec.cfg)?;
    evolve_with_symbol(packet, &lambda, ec.tau, ec.cfg.hbar)
}

/// Amplitudes on the dual position grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionField {
    /// The momentum grid this field is dual to.
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
}

impl PositionField {
    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.position_cell_volume())
            .sqrt()
    }

    /// Probability mass within the outer `fraction` of any axis.
    pub fn edge_mass(&self, fraction: f64) -> f64 {
        let total: f64 = self.values.iter().map(|a| a.norm_sqr()).sum();
        let edge: f64 = self
            .values
            .iter()
            .enumerate()
            .filter(|(k, _)| {
                self.grid.multi_index(*k).iter().enumerate().any(|(a, &i)| {
                    let n = self.grid.points_per_axis[a];
                    let band = ((fraction * n as f64).ceil() as usize).max(1);
                    i < band || i >= n - band
                })
            })
            .map(|(_, v)| v.norm_sqr())
            .sum();
        edge / total
    }
}

fn scale_factor(spacing: impl Iterator<Item = f64>) -> f64 {
    spacing.map(|h| h / (2.0 * PI).sqrt()).product()
}

/// `f(x) = (2π)^{-d/2} ∫ φ(ξ) e^{iξ·x} dξ` on the dual grid.
pub fn to_position(packet: &WavePacket) -> PositionField {
    let grid = &packet.grid;
    let mut values = packet.amplitudes.clone();
    transform(&mut values, &grid.points_per_axis, Direction::ToPosition);
    let k = scale_factor((0..grid.dims).map(|a| grid.spacing(a)));
    values.iter_mut().for_each(|v| *v *= k);
    PositionField {
        grid: grid.clone(),
        values,
    }
}

/// Inverse of [`to_position`].
pub fn to_momentum(field: &PositionField) -> WavePacket {
    let grid = &field.grid;
    let mut amplitudes = field.values.clone();
    transform(&mut amplitudes, &grid.points_per_axis, Direction::ToMomentum);
    let k = scale_factor((0..grid.dims).map(|a| grid.position_spacing(a)));
    amplitudes.iter_mut().for_each(|v| *v *= k);
    WavePacket {
        grid: grid.clone(),
        amplitudes,
    }
}

/// `Σ f |φ|² dξ^d / ‖φ‖²`.
pub fn momentum_observable_expectation(
    packet: &WavePacket,
    f: impl Fn(&FourMomentum) -> f64 + Sync,
) -> f64 {
    let grid = &packet.grid;
    // Terms are evaluated in parallel but summed in node order, so the
    // result does not depend on the thread count.
    let terms: Vec<(f64, f64)> = packet
        .amplitudes
        .par_iter()
        .enumerate()
        .map(|(k, a)| {
            let w = a.norm_sqr();
            if w == 0.0 {
                (0.0, 0.0)
            } else {
                (f(&grid.node_momentum(k)) * w, w)
            }
        })
        .collect();
    let (num, den) = terms.iter().fold((0.0, 0.0), |acc, t| (acc.0 + t.0, acc.1 + t.1));
    num / den
}

pub fn centroid_position(field: &PositionField) -> Vec<f64> {
    weighted_centroid(&field.grid, &field.values, |k| field.grid.position_coordinates(k))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupVelocity {
    pub measured: Vec<f64>,
    pub predicted: Vec<f64>,
    pub rel_err: f64,
}

/// Step of the central differences for `∇λ`.
pub const GRADIENT_STEP: f64 = 1e-3;

/// `∇λ(ξ)/ħ` restricted to the grid's axes, by central differences.
pub fn predicted_velocity(
    grid: &GridSpec,
    center: &[f64],
    symbol: EvolutionSymbol<'_>,
    cfg: &ConeConfig,
) -> Result<Vec<f64>> {
    // Table-backed runs are checked against direct integration.
    let symbol = match symbol {
        EvolutionSymbol::Exact(table) => EvolutionSymbol::Direct(table.quad),
        s => s,
    };
    (0..grid.dims)
        .map(|a| {
            let mut plus = center.to_vec();
            let mut minus = center.to_vec();
            plus[a] += GRADIENT_STEP;
            minus[a] -= GRADIENT_STEP;
            let lp = symbol_at(&grid.momentum(&plus), symbol, cfg)?;
            let lm = symbol_at(&grid.momentum(&minus), symbol, cfg)?;
            Ok((lp - lm) / (2.0 * GRADIENT_STEP * cfg.hbar))
        })
        .collect()
}

/// Compares the drift of the position centroid over `ec.tau` with the
/// stationary-phase velocity at the packet's momentum centroid.
pub fn group_velocity_check(packet: &WavePacket, ec: &EvolutionConfig<'_>) -> Result<GroupVelocity> {
    if !(ec.tau != 0.0 && ec.tau.is_finite()) {
        return Err(domain("group velocity needs a finite nonzero proper time"));
    }
    let start = to_position(packet);
    let end = to_position(&evolve(packet, ec)?);
    for (label, field) in [("initial", &start), ("evolved", &end)] {
        let edge = field.edge_mass(EDGE_FRACTION);
        if edge > MAX_TRUNCATED_MASS {
            return Err(Error::WrapAround(format!(
                "{label} position density has {edge:e} of its mass at the periodic boundary"
            )));
        }
    }
    let (x0, x1) = (centroid_position(&start), centroid_position(&end));
    let measured: Vec<f64> = x0.iter().zip(&x1).map(|(a, b)| (b - a) / ec.tau).collect();
    let predicted = predicted_velocity(&packet.grid, &packet.centroid_momentum(), ec.symbol, &ec.cfg)?;
    let diff = measured
        .iter()
        .zip(&predicted)
        .map(|(m, p)| (m - p).powi(2))
        .sum::<f64>()
        .sqrt();
    let scale = predicted.iter().map(|p| p * p).sum::<f64>().sqrt();
    Ok(GroupVelocity {
        rel_err: diff / scale,
        measured,
        predicted,
    })
}

/// `‖φ_exact(τ) - φ_approx(τ)‖ / ‖φ‖`, the approximation keeping the cone cutoff.
pub fn compare_exact_vs_approx(
    packet: &WavePacket,
    tau: f64,
    table: &RadialTable,
    cfg: &ConeConfig,
) -> Result<f64> {
    let run = |symbol| {
        evolve(
            packet,
            &EvolutionConfig {
                symbol,
                tau,
                cfg: *cfg,
            },
        )
    };
    let exact = run(EvolutionSymbol::Exact(table))?;
    let approx = run(EvolutionSymbol::Approximation { cone_cutoff: true })?;
    Ok(exact.distance(&approx)? / packet.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx_config(tau: f64) -> EvolutionConfig<'static> {
        EvolutionConfig {
            symbol: EvolutionSymbol::Approximation { cone_cutoff: true },
            tau,
            cfg: ConeConfig::default(),
        }
    }

    fn packet_2d() -> WavePacket {
        let grid = GridSpec::uniform(2, 64, 8.0).unwrap();
        make_gaussian_packet(&grid, &FourMomentum::new(3.0, 1.0, 0.0, 0.0), &[1.0, 1.0]).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::uniform(3, 8, 1.0).is_err());
        assert!(GridSpec::uniform(2, 12, 1.0).is_err());
        assert!(GridSpec::new(vec![8, 8], vec![[-1.0, 2.0], [-1.0, 1.0]]).is_err());
        assert!(GridSpec::uniform(4, 128, 1.0).is_err());
        let g = GridSpec::uniform(2, 8, 2.0).unwrap();
        assert_eq!(g.coordinates(0), vec![-2.0, -2.0]);
        assert_eq!(g.coordinates(9), vec![-1.5, -1.5]);
        assert_eq!(g.position_coordinates(4 * 8 + 4), vec![0.0, 0.0]);
    }

    #[test]
    fn gaussian_packet_is_normalized_and_centred() {
        let p = packet_2d();
        assert!((p.norm() - 1.0).abs() < 1e-12);
        let c = p.centroid_momentum();
        let h = p.grid.spacing(0);
        assert!((c[0] - 3.0).abs() < h && (c[1] - 1.0).abs() < h);
    }

    #[test]
    fn packet_preconditions() {
        let grid = GridSpec::uniform(2, 64, 8.0).unwrap();
        let c = FourMomentum::new(3.0, 1.0, 0.0, 0.0);
        assert!(matches!(make_gaussian_packet(&grid, &c, &[0.3, 1.0]), Err(Error::Config(_))));
        assert!(matches!(make_gaussian_packet(&grid, &c, &[3.0, 3.0]), Err(Error::Config(_))));
        assert!(make_gaussian_packet(&grid, &FourMomentum::new(9.0, 0.0, 0.0, 0.0), &[1.0, 1.0]).is_err());
        assert!(make_gaussian_packet(&grid, &FourMomentum::new(1.0, 0.0, 1.0, 0.0), &[1.0, 1.0]).is_err());
    }

    #[test]
    fn evolution_is_a_pure_phase() {
        let p = packet_2d();
        assert_eq!(evolve(&p, &approx_config(0.0)).unwrap(), p);
        let q = evolve(&p, &approx_config(0.7)).unwrap();
        assert!((q.norm() - p.norm()).abs() < 1e-13);
        for (a, b) in p.amplitudes.iter().zip(&q.amplitudes) {
            assert!((a.norm() - b.norm()).abs() < 1e-15);
        }
        assert!(evolve(&p, &approx_config(f64::NAN)).is_err());
    }

    #[test]
    fn cone_cutoff_flag() {
        let cfg = ConeConfig::default();
        let outside = FourMomentum::new(1.0, 2.0, 0.0, 0.0);
        assert_eq!(approximate_symbol(&outside, &cfg, true), 0.0);
        assert_eq!(approximate_symbol(&outside, &cfg, false), -0.75);
    }

    #[test]
    fn position_round_trip() {
        let p = packet_2d();
        let f = to_position(&p);
        assert!((f.norm() - 1.0).abs() < 1e-10);
        let back = to_momentum(&f);
        assert!(back.distance(&p).unwrap() < 1e-10);
    }

    #[test]
    fn gaussian_maps_to_gaussian() {
        // |f(x)| ∝ exp(-σ²|x|²) for a Gaussian of momentum width σ.
        let sigma = 1.2;
        let grid = GridSpec::uniform(2, 128, 12.0).unwrap();
        let p = make_gaussian_packet(&grid, &FourMomentum::new(0.0, 0.0, 0.0, 0.0), &[sigma; 2]).unwrap();
        let f = to_position(&p);
        let centre = grid.len() / 2 + grid.points_per_axis[1] / 2;
        let f0 = f.values[centre].norm();
        for k in 0..grid.len() {
            let x = grid.position_coordinates(k);
            let r2 = x[0] * x[0] + x[1] * x[1];
            let want = f0 * (-sigma * sigma * r2).exp();
            assert!((f.values[k].norm() - want).abs() < 1e-10, "{x:?}");
        }
        assert!(centroid_position(&f).iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn observables_are_conserved() {
        let p = packet_2d();
        let q = evolve(&p, &approx_config(2.5)).unwrap();
        let one = momentum_observable_expectation(&p, |_| 1.0);
        assert!((one - 1.0).abs() < 1e-14);
        let a = momentum_observable_expectation(&p, minkowski_q);
        let b = momentum_observable_expectation(&q, minkowski_q);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn approximate_group_velocity() {
        // λ ≈ q/4 gives ∇λ = (ξ₀/2, -ξ₁/2).
        let grid = GridSpec::uniform(2, 128, 6.4).unwrap();
        let p = make_gaussian_packet(&grid, &FourMomentum::new(3.0, 1.0, 0.0, 0.0), &[0.4, 0.4]).unwrap();
        let gv = group_velocity_check(&p, &approx_config(0.5)).unwrap();
        assert!((gv.predicted[0] - 1.5).abs() < 1e-6 && (gv.predicted[1] + 0.5).abs() < 1e-6);
        assert!(gv.rel_err < 0.05, "{gv:?}");
    }

    #[test]
    fn wrap_around_is_reported() {
        let grid = GridSpec::uniform(2, 128, 8.0).unwrap();
        let p = make_gaussian_packet(&grid, &FourMomentum::new(3.0, 0.0, 0.0, 0.0), &[0.5, 0.5]).unwrap();
        let r = group_velocity_check(&p, &approx_config(20.0));
        assert!(matches!(r, Err(Error::WrapAround(_))), "{r:?}");
    }
}
