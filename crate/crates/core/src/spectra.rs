//! Finite-difference check that the deformed family shares the bouncer
//! spectrum.
//!
//! `-phi'' + V phi = E phi` on `[0, L]` with hard walls at both ends is
//! discretized by the three-point stencil on `points` interior nodes, and
//! the lowest levels of the resulting symmetric tridiagonal matrix are
//! found by Sturm bisection.

use serde::{Deserialize, Serialize};

use crate::airy;
use crate::bouncer::ModeConstants;
use crate::error::{Error, Result};
use crate::numerics::{eigenvalues_tridiagonal, TridiagonalSystem};
use crate::susy::IsospectralPotential;

pub const MIN_POINTS: usize = 10;
pub const MAX_LEVELS: usize = 10;
/// Largest `|Ai(L - a_k)|` accepted at the artificial wall.
pub const WALL_AMPLITUDE_LIMIT: f64 = 1e-12;

/// Three-point discretization of `-d^2/ds^2 + V` on `(0, L)`.
pub fn discretize(potential: impl Fn(f64) -> f64, length: f64, points: usize) -> Result<TridiagonalSystem> {
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::invalid(format!("box length must be positive, got {length}")));
    }
    if points < MIN_POINTS {
        return Err(Error::invalid(format!("need at least {MIN_POINTS} grid points, got {points}")));
    }
    let delta = length / (points + 1) as f64;
    let inv = 1.0 / (delta * delta);
    let mut diagonal = Vec::with_capacity(points);
    for node in 1..=points {
        let s = node as f64 * delta;
        let value = potential(s);
        if !value.is_finite() {
            return Err(Error::NonFinitePotential { node, s, value });
        }
        diagonal.push(2.0 * inv + value);
    }
    TridiagonalSystem::new(diagonal, vec![-inv; points - 1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralComparison {
    pub lambda: f64,
    #[serde(rename = "L")]
    pub length: f64,
    pub points: usize,
    pub k: usize,
    pub eigenvalues_qbb: Vec<f64>,
    pub eigenvalues_lambda: Vec<f64>,
    /// Airy zeros `a_1..a_k`.
    pub airy_reference: Vec<f64>,
    pub max_pairwise_gap: f64,
}

impl SpectralComparison {
    /// Largest `|E_n - a_n|` over both discretized spectra.
    pub fn max_reference_deviation(&self) -> f64 {
        self.eigenvalues_qbb
            .iter()
            .chain(&self.eigenvalues_lambda)
            .zip(self.airy_reference.iter().cycle())
            .map(|(e, a)| (e - a).abs())
            .fold(0.0, f64::max)
    }
}

/// Checks that the first `k` exact modes have died out before `L`.
pub fn validate_box(length: f64, k: usize) -> Result<Vec<f64>> {
    let mut zeros = Vec::with_capacity(k);
    for level in 1..=k {
        let a = airy::airy_zero(level)?.a_n;
        let scaled = airy::eval_scaled(length - a);
        let amplitude = (scaled.values.ai * (-scaled.zeta).exp()).abs();
        if !(amplitude < WALL_AMPLITUDE_LIMIT) {
            return Err(Error::BoxTooSmall { length, level, amplitude, limit: WALL_AMPLITUDE_LIMIT });
        }
        zeros.push(a);
    }
    Ok(zeros)
}

/// Lowest `k` levels of `V = s` and of `V(s; lambda)` on the same grid.
pub fn compare_spectra(lambda: f64, length: f64, points: usize, k: usize) -> Result<SpectralComparison> {
    if !(1..=MAX_LEVELS).contains(&k) {
        return Err(Error::invalid(format!("k must be in 1..={MAX_LEVELS}, got {k}")));
    }
    let family = IsospectralPotential::new(lambda, ModeConstants::Exact)?;
    let airy_reference = validate_box(length, k)?;

    let qbb = discretize(|s| s, length, points)?;
    let deformed = discretize(|s| family.family_potential_unchecked(s), length, points)?;
    let eigenvalues_qbb = eigenvalues_tridiagonal(&qbb, k)?;
    let eigenvalues_lambda = eigenvalues_tridiagonal(&deformed, k)?;
    let max_pairwise_gap = eigenvalues_qbb
        .iter()
        .zip(&eigenvalues_lambda)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(SpectralComparison {
        lambda,
        length,
        points,
        k,
        eigenvalues_qbb,
        eigenvalues_lambda,
        airy_reference,
        max_pairwise_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn free_particle_in_a_box() {
        let sys = discretize(|_| 0.0, 1.0, 2000).unwrap();
        let ground = eigenvalues_tridiagonal(&sys, 1).unwrap()[0];
        // Discrete value (4/D^2) sin^2(pi D / 2).
        let delta = 1.0 / 2001.0;
        let exact = 4.0 / (delta * delta) * (PI * delta / 2.0).sin().powi(2);
        assert!((ground - exact).abs() < 1e-9);
        assert!((ground - PI * PI).abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(discretize(|s| s, 40.0, 5).is_err());
        assert!(discretize(|s| s, 0.0, 100).is_err());
        match discretize(|s| if s > 0.5 { f64::NAN } else { s }, 1.0, 20) {
            Err(Error::NonFinitePotential { node, .. }) => assert_eq!(node, 11),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn small_box_rejected() {
        match compare_spectra(1.0, 12.0, 500, 6) {
            Err(Error::BoxTooSmall { level, .. }) => assert!(level <= 6),
            other => panic!("{other:?}"),
        }
        assert!(compare_spectra(1.0, 40.0, 500, 0).is_err());
        assert!(compare_spectra(1.0, 40.0, 500, 11).is_err());
        assert!(compare_spectra(0.0, 40.0, 500, 3).is_err());
    }
}
