//! The 2×2 representation of the algebra generated by the quantum
//! projection `P_Q` and the causal projection `P_R`, and the spin
//! classification that follows from it.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Distance from 0 or 1 under which a parameter is treated as the endpoint.
pub const ENDPOINT_SNAP: f64 = 1e-12;

/// A point `p ∈ [0, 1]` of the spectrum of `(P_Q - P_R)²`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct SpinParameter(f64);

impl SpinParameter {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(domain(format!("spin parameter {p} outside [0, 1]")));
        }
        Ok(Self(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Real 2×2 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Matrix2(pub [[f64; 2]; 2]);

impl Matrix2 {
    pub const ZERO: Self = Self([[0.0, 0.0], [0.0, 0.0]]);
    pub const IDENTITY: Self = Self([[1.0, 0.0], [0.0, 1.0]]);

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self([[a, b], [c, d]])
    }

    pub fn scale(self, k: f64) -> Self {
        let m = self.0;
        Self([[k * m[0][0], k * m[0][1]], [k * m[1][0], k * m[1][1]]])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn transpose(&self) -> Self {
        let m = self.0;
        Self([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (self.0[0][1] - self.0[1][0]).abs() <= tol
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.0[0][1].abs() <= tol && self.0[1][0].abs() <= tol
    }

    /// Row-major entries `[m00, m01, m10, m11]`.
    pub fn entries(&self) -> [f64; 4] {
        [self.0[0][0], self.0[0][1], self.0[1][0], self.0[1][1]]
    }
}

impl Add for Matrix2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        Self([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Matrix2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + rhs.scale(-1.0)
    }
}

impl Mul for Matrix2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self(out)
    }
}

/// Kind of representation carried by a spin parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SpinKind {
    /// `p = 0`: one-dimensional representation, spin 0.
    Scalar,
    /// `p ∈ (0, 1)`: irreducible two-dimensional representation, spin ½.
    Spinor,
    /// `p = 1`: direct sum of two one-dimensional representations, spin 1.
    Vector,
}

impl fmt::Display for SpinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpinKind::Scalar => "scalar",
            SpinKind::Spinor => "spinor",
            SpinKind::Vector => "vector",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SpinClass {
    pub kind: SpinKind,
    pub representation_dimension: usize,
    pub reducible: bool,
}

impl SpinClass {
    pub fn of(kind: SpinKind) -> Self {
        let (representation_dimension, reducible) = match kind {
            SpinKind::Scalar => (1, false),
            SpinKind::Spinor => (2, false),
            SpinKind::Vector => (2, true),
        };
        Self {
            kind,
            representation_dimension,
            reducible,
        }
    }
}

/// Generator letters of the two-projection algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    Q,
    R,
}

/// Image of `P_Q`: `[[1-p, √(p(1-p))], [√(p(1-p)), p]]`.
pub fn rep_pq(p: SpinParameter) -> Matrix2 {
    let p = p.value();
    let off = (p * (1.0 - p)).sqrt();
    Matrix2::new(1.0 - p, off, off, p)
}

/// Image of `P_R`: `[[1, 0], [0, 0]]`.
pub fn rep_pr() -> Matrix2 {
    Matrix2::new(1.0, 0.0, 0.0, 0.0)
}

/// Product of generator images in word order.
pub fn represent_word(word: &[Generator], p: SpinParameter) -> Result<Matrix2> {
    let (first, rest) = word
        .split_first()
        .ok_or_else(|| domain("cannot represent the empty word"))?;
    let image = |g: &Generator| match g {
        Generator::Q => rep_pq(p),
        Generator::R => rep_pr(),
    };
    Ok(rest.iter().fold(image(first), |acc, g| acc * image(g)))
}

/// Image of the observable `P_Q + P_R`.
pub fn observable_sum(p: SpinParameter) -> Matrix2 {
    rep_pq(p) + rep_pr()
}

pub fn classify_spin(p: SpinParameter) -> SpinClass {
    let p = p.value();
    let kind = if p <= ENDPOINT_SNAP {
        SpinKind::Scalar
    } else if p >= 1.0 - ENDPOINT_SNAP {
        SpinKind::Vector
    } else {
        SpinKind::Spinor
    };
    SpinClass::of(kind)
}

/// Frobenius norm of `[φ(P_Q), φ(P_R)]`; vanishes exactly at `p ∈ {0, 1}`.
pub fn commutator_norm(p: SpinParameter) -> f64 {
    let (q, r) = (rep_pq(p), rep_pr());
    (q * r - r * q).frobenius_norm()
}

/// Checks `(φ(P_Q) - φ(P_R))² = p·I` and returns `p`.
pub fn difference_squared_value(p: SpinParameter) -> Result<f64> {
    let d = rep_pq(p) - rep_pr();
    let dev = (d * d).max_abs_diff(&Matrix2::IDENTITY.scale(p.value()));
    if dev > 1e-12 {
        return Err(Error::Consistency(format!(
            "(P_Q - P_R)^2 deviates from p·I by {dev:e} at p = {}",
            p.value()
        )));
    }
    Ok(p.value())
}

/// Spin classes admitted for luminal or underluminal propagation.
///
/// On the light-cone boundary `P_R` is multiplication by the indicator of a
/// null set, hence zero, so the spectrum of `(P_Q - P_R)²` is `{0, 1}`; the
/// value 0 is unobservable, leaving only `p = 1`.
pub fn classify_propagation(luminal: bool) -> BTreeSet<SpinClass> {
    let kinds: &[SpinKind] = if luminal {
        &[SpinKind::Vector]
    } else {
        &[SpinKind::Scalar, SpinKind::Spinor, SpinKind::Vector]
    };
    kinds.iter().map(|&k| SpinClass::of(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(p: f64) -> SpinParameter {
        SpinParameter::new(p).unwrap()
    }

    #[test]
    fn rejects_out_of_range_parameter() {
        assert!(matches!(SpinParameter::new(-1e-9), Err(Error::Domain(_))));
        assert!(SpinParameter::new(1.5).is_err());
        assert!(SpinParameter::new(f64::NAN).is_err());
    }

    #[test]
    fn rep_pq_endpoints_and_midpoint() {
        assert_eq!(rep_pq(sp(0.0)), Matrix2::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(rep_pq(sp(1.0)), Matrix2::new(0.0, 0.0, 0.0, 1.0));
        assert_eq!(rep_pq(sp(0.5)), Matrix2::new(0.5, 0.5, 0.5, 0.5));
    }

    #[test]
    fn rep_pr_is_rank_one_projector() {
        let r = rep_pr();
        assert_eq!(r, Matrix2::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(r * r, r);
        assert_eq!(r.trace(), 1.0);
    }

    #[test]
    fn word_products() {
        let half = sp(0.5);
        assert_eq!(represent_word(&[Generator::Q], half).unwrap(), rep_pq(half));
        let h = Matrix2::new(0.5, 0.5, 0.5, 0.5);
        let direct = h * Matrix2::new(1.0, 0.0, 0.0, 0.0) * h;
        let got = represent_word(&[Generator::Q, Generator::R, Generator::Q], half).unwrap();
        assert!(got.max_abs_diff(&direct) < 1e-15);
        assert!(got.max_abs_diff(&Matrix2::new(0.25, 0.25, 0.25, 0.25)) < 1e-15);
        for p in [0.0, 0.3, 1.0] {
            assert_eq!(
                represent_word(&[Generator::R, Generator::R], sp(p)).unwrap(),
                rep_pr()
            );
        }
        assert!(matches!(represent_word(&[], half), Err(Error::Domain(_))));
    }

    #[test]
    fn observable_sum_table() {
        assert_eq!(observable_sum(sp(0.0)), Matrix2::new(2.0, 0.0, 0.0, 0.0));
        assert_eq!(observable_sum(sp(0.5)), Matrix2::new(1.5, 0.5, 0.5, 0.5));
        assert_eq!(observable_sum(sp(1.0)), Matrix2::new(1.0, 0.0, 0.0, 1.0));
    }

    #[test]
    fn spin_classes() {
        assert_eq!(classify_spin(sp(0.0)).kind, SpinKind::Scalar);
        assert_eq!(classify_spin(sp(0.5)).kind, SpinKind::Spinor);
        assert_eq!(classify_spin(sp(1.0)).kind, SpinKind::Vector);
        assert_eq!(classify_spin(sp(5e-13)).kind, SpinKind::Scalar);
        assert_eq!(classify_spin(sp(1.0 - 5e-13)).kind, SpinKind::Vector);
        assert_eq!(classify_spin(sp(1e-11)).kind, SpinKind::Spinor);
        let v = classify_spin(sp(1.0));
        assert_eq!((v.representation_dimension, v.reducible), (2, true));
        let s = classify_spin(sp(0.0));
        assert_eq!(s.representation_dimension, 1);
    }

    #[test]
    fn commutator_vanishes_only_at_endpoints() {
        assert_eq!(commutator_norm(sp(0.0)), 0.0);
        assert_eq!(commutator_norm(sp(1.0)), 0.0);
        // [[0,-b],[b,0]] with b = 1/2
        let expected = 2.0_f64.sqrt() * 0.5;
        assert!((commutator_norm(sp(0.5)) - expected).abs() < 1e-15);
    }

    #[test]
    fn difference_squared_returns_parameter() {
        assert_eq!(difference_squared_value(sp(0.0)).unwrap(), 0.0);
        assert_eq!(difference_squared_value(sp(1.0)).unwrap(), 1.0);
        assert_eq!(difference_squared_value(sp(0.25)).unwrap(), 0.25);
        // at p = 0 the two images coincide
        assert_eq!(rep_pq(sp(0.0)) - rep_pr(), Matrix2::ZERO);
    }

    #[test]
    fn propagation_classes() {
        let luminal = classify_propagation(true);
        assert_eq!(luminal.len(), 1);
        assert!(luminal.contains(&SpinClass::of(SpinKind::Vector)));
        assert!(!luminal.contains(&SpinClass::of(SpinKind::Spinor)));
        let sub = classify_propagation(false);
        let kinds: Vec<_> = sub.iter().map(|c| c.kind).collect();
        assert_eq!(kinds, vec![SpinKind::Scalar, SpinKind::Spinor, SpinKind::Vector]);
    }
}
