//! Strictly isospectral deformations of the bouncer potential.
//!
//! The ground state `psi_1` gives the Witten superpotential
//! `w_p = -psi_1'/psi_1` with `w_p^2 - w_p' = s - S_1`. The general Riccati
//! solution with the same partner `w^2 + w'` is
//! `w_g = w_p + psi_1^2 / (I0 + lambda)`, where `I0(s) = int_0^s psi_1^2`.
//! Undoing the factorization with `w_g` gives the family
//!
//! `V(s; lambda) = s - 4 psi psi' / (I0 + lambda) + 2 psi^4 / (I0 + lambda)^2`
//!
//! which equals `s - 2 (ln(I0 + lambda))''` and whose ground state at the
//! unchanged energy `S_1` is `phi_1 = N(lambda) psi_1 / (I0 + lambda)`
//! with `N(lambda) = sqrt(lambda (lambda + 1))`.

use serde::{Deserialize, Serialize};

use crate::bouncer::{CumulativeProbability, Eigenmode, ModeConstants};
use crate::error::{Error, Result};
use crate::numerics::{derivative, DerivativeOrder};

/// Smallest `|psi_1|` for which ratios like `psi'/psi` are attempted.
pub const UNDERFLOW_GUARD: f64 = 1e-280;

/// Left end for emitted grids of wall-singular quantities.
pub const S_MIN: f64 = 1e-3;

/// Normalization `sqrt(lambda (lambda + 1))` of the deformed ground state.
pub fn deformed_norm(lambda: f64) -> f64 {
    (lambda * (lambda + 1.0)).sqrt()
}

/// `w_p(s) = -psi_1'(s) / psi_1(s)`.
pub fn witten_superpotential(mode: &Eigenmode, s: f64) -> Result<f64> {
    let (psi, slope) = guarded_psi(mode, s)?;
    Ok(-slope / psi)
}

fn guarded_psi(mode: &Eigenmode, s: f64) -> Result<(f64, f64)> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::invalid(format!("superpotential needs s > 0, got {s}")));
    }
    let (psi, slope) = mode.psi_and_slope(s);
    if psi.abs() < UNDERFLOW_GUARD {
        return Err(Error::WaveFunctionUnderflow { s, value: psi, guard: UNDERFLOW_GUARD });
    }
    Ok((psi, slope))
}

/// The family `V(s; lambda)` together with the ground-state data that
/// generate it. Immutable once built.
#[derive(Debug, Clone)]
pub struct IsospectralPotential {
    lambda: f64,
    i0: CumulativeProbability,
}

/// `raw` is `dv/ds - 2 v w_p - 1`; `scale` the sum of magnitudes of its
/// three terms. `v` grows like `psi^-2`, so only `raw / scale` is
/// meaningful deep in the forbidden region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BernoulliResidual {
    pub raw: f64,
    pub scale: f64,
}

impl BernoulliResidual {
    pub fn relative(&self) -> f64 {
        self.raw / self.scale
    }
}

impl IsospectralPotential {
    pub fn new(lambda: f64, constants: ModeConstants) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!("lambda must be positive and finite, got {lambda}")));
        }
        let mode = Eigenmode::ground(constants);
        Ok(IsospectralPotential { lambda, i0: CumulativeProbability::new(&mode)? })
    }

    /// Reuses an existing `I0` table, e.g. when scanning lambda.
    pub fn with_cache(lambda: f64, i0: CumulativeProbability) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!("lambda must be positive and finite, got {lambda}")));
        }
        if i0.mode().n != 1 {
            return Err(Error::invalid("the deformation is seeded by the ground state"));
        }
        Ok(IsospectralPotential { lambda, i0 })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn ground_mode(&self) -> &Eigenmode {
        self.i0.mode()
    }

    pub fn cumulative(&self) -> &CumulativeProbability {
        &self.i0
    }

    pub fn i0(&self, s: f64) -> f64 {
        self.i0.value(s)
    }

    fn denominator(&self, s: f64) -> f64 {
        self.i0.value(s) + self.lambda
    }

    pub fn norm(&self) -> f64 {
        deformed_norm(self.lambda)
    }

    pub fn witten_superpotential(&self, s: f64) -> Result<f64> {
        witten_superpotential(self.ground_mode(), s)
    }

    /// `v = (I0 + lambda) / psi_1^2`, the Bernoulli solution.
    pub fn bernoulli_v(&self, s: f64) -> Result<f64> {
        let (psi, _) = guarded_psi(self.ground_mode(), s)?;
        Ok(self.denominator(s) / (psi * psi))
    }

    /// Coefficient `c` of the wall behaviour `v ~ c / s^2`.
    pub fn bernoulli_wall_coefficient(&self) -> f64 {
        let slope = self.ground_mode().psi_and_slope(0.0).1;
        self.lambda / (slope * slope)
    }

    /// `dv/ds - 2 v w_p - 1` with `dv/ds` by central differences.
    pub fn bernoulli_residual(&self, s: f64) -> Result<BernoulliResidual> {
        let v = self.bernoulli_v(s)?;
        let w = self.witten_superpotential(s)?;
        let step = first_step(s);
        self.bernoulli_v(s - step)?;
        let slope = derivative(|t| self.bernoulli_v(t).unwrap_or(f64::NAN), s, DerivativeOrder::First, step);
        let coupling = 2.0 * v * w;
        Ok(BernoulliResidual { raw: slope - coupling - 1.0, scale: slope.abs() + coupling.abs() + 1.0 })
    }

    /// `w_g = w_p + psi_1^2 / (I0 + lambda)`.
    pub fn general_superpotential(&self, s: f64) -> Result<f64> {
        let (psi, slope) = guarded_psi(self.ground_mode(), s)?;
        Ok(-slope / psi + psi * psi / self.denominator(s))
    }

    /// `(w_g^2 + w_g') - (w_p^2 + w_p')`, derivatives by central differences.
    pub fn riccati_residual(&self, s: f64) -> Result<f64> {
        let step = first_step(s);
        self.witten_superpotential(s - step)?;
        self.witten_superpotential(s + step)?;
        let wg = self.general_superpotential(s)?;
        let wp = self.witten_superpotential(s)?;
        let d = |f: &dyn Fn(f64) -> Result<f64>| {
            derivative(|t| f(t).unwrap_or(f64::NAN), s, DerivativeOrder::First, step)
        };
        let wg_prime = d(&|t| self.general_superpotential(t));
        let wp_prime = d(&|t| self.witten_superpotential(t));
        Ok((wg * wg + wg_prime) - (wp * wp + wp_prime))
    }

    /// `V(s; lambda)` in the expanded three-term form.
    pub fn family_potential(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::invalid(format!("potential is defined for s >= 0, got {s}")));
        }
        Ok(self.family_potential_unchecked(s))
    }

    pub(crate) fn family_potential_unchecked(&self, s: f64) -> f64 {
        let (psi, slope) = self.ground_mode().psi_and_slope(s);
        let d = self.denominator(s);
        let ratio = psi * psi / d;
        s - 4.0 * psi * slope / d + 2.0 * ratio * ratio
    }

    /// `V(s; lambda) = s - 2 (ln(I0 + lambda))''` with the second
    /// derivative taken numerically; an independent check on the
    /// expanded form.
    pub fn family_potential_log_form(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::invalid(format!("log form needs s > 0, got {s}")));
        }
        // One Richardson step makes the stencil fourth order.
        let step = 1e-3f64.min(0.25 * s);
        let f = |t: f64| self.denominator(t).ln();
        let fine = derivative(f, s, DerivativeOrder::Second, step);
        let coarse = derivative(f, s, DerivativeOrder::Second, 2.0 * step);
        Ok(s - 2.0 * (4.0 * fine - coarse) / 3.0)
    }

    /// `phi_1(s; lambda) = N(lambda) psi_1(s) / (I0(s) + lambda)`.
    pub fn deformed_ground_state(&self, s: f64) -> Result<f64> {
        let psi = self.ground_mode().psi(s)?;
        Ok(self.norm() * psi / self.denominator(s))
    }

    /// `-phi_1'' + V phi_1 - S_1 phi_1` with `phi_1''` by central differences.
    pub fn schrodinger_residual(&self, s: f64) -> Result<f64> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::invalid(format!("residual needs s > 0, got {s}")));
        }
        let step = DerivativeOrder::Second.default_step().min(0.5 * s);
        let phi = |t: f64| self.norm() * self.ground_mode().psi_unchecked(t) / self.denominator(t);
        let second = derivative(phi, s, DerivativeOrder::Second, step);
        let energy = self.ground_mode().energy;
        Ok(-second + (self.family_potential_unchecked(s) - energy) * phi(s))
    }
}

/// Central-difference step near the wall, where the quantities behave
/// like powers of `1/s`.
fn first_step(s: f64) -> f64 {
    DerivativeOrder::First.default_step() * s.min(1.0)
}
