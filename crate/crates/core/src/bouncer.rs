//! The quantum bouncing ball: a particle in the potential `m g z` above a
//! perfectly reflecting floor at `z = 0`.
//!
//! In units of the gravitational length `l_g = (hbar^2 / (2 m^2 g))^{1/3}`
//! and energy `m g l_g`, the stationary equation is `psi'' = (s - S) psi`
//! on `s > 0` with `psi(0) = 0`, and the eigenmodes are
//! `psi_n(s) = N_n Ai(s - S_n)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::airy;
use crate::error::{Error, Result};
use crate::numerics::{gauss_kronrod_15, integrate, integrate_to_infinity, SemiInfiniteResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalScaling {
    /// kg
    pub mass: f64,
    /// m/s^2
    pub gravity: f64,
    /// J s
    pub hbar: f64,
    /// Gravitational length l_g in metres.
    pub length_unit: f64,
    /// m g l_g in joules.
    pub energy_unit: f64,
}

impl PhysicalScaling {
    pub fn new(mass: f64, gravity: f64, hbar: f64) -> Result<Self> {
        for (name, value) in [("mass", mass), ("gravity", gravity), ("hbar", hbar)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive and finite, got {value}")));
            }
        }
        let length_unit = (hbar * hbar / (2.0 * mass * mass * gravity)).cbrt();
        Ok(PhysicalScaling { mass, gravity, hbar, length_unit, energy_unit: mass * gravity * length_unit })
    }

    pub fn height_to_s(&self, z: f64) -> f64 {
        z / self.length_unit
    }

    pub fn s_to_height(&self, s: f64) -> f64 {
        s * self.length_unit
    }

    pub fn energy_to_dimensionless(&self, energy: f64) -> f64 {
        energy / self.energy_unit
    }

    pub fn dimensionless_to_energy(&self, level: f64) -> f64 {
        level * self.energy_unit
    }
}

/// Which constants `(S_n, N_n)` an eigenmode uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeConstants {
    /// Ground state only: `S_1 = (9 pi / 8)^{2/3}`, `N_1 = (8 pi^2 / 9)^{1/6}`.
    /// These are WKB estimates, so `psi_1(0)` is small but not zero.
    PaperWkb,
    /// `S_n = a_n` (true zero of Ai) and `N_n = 1 / |Ai'(-a_n)|`.
    Exact,
}

impl ModeConstants {
    pub fn label(self) -> &'static str {
        match self {
            ModeConstants::PaperWkb => "paper",
            ModeConstants::Exact => "exact",
        }
    }
}

/// WKB ground-state energy `(9 pi / 8)^{2/3}`.
pub fn wkb_ground_energy() -> f64 {
    (9.0 * PI / 8.0).powf(2.0 / 3.0)
}

/// WKB ground-state prefactor `(8 pi^2 / 9)^{1/6}`.
pub fn wkb_ground_norm() -> f64 {
    (8.0 * PI * PI / 9.0).powf(1.0 / 6.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenmode {
    pub n: usize,
    /// Dimensionless energy S_n.
    pub energy: f64,
    /// Prefactor N_n.
    pub norm: f64,
    pub constants: ModeConstants,
}

impl Eigenmode {
    pub fn new(n: usize, constants: ModeConstants) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("mode index starts at 1"));
        }
        match constants {
            ModeConstants::PaperWkb if n > 1 => Err(Error::invalid(format!(
                "paper constants exist only for the ground state, not n = {n}"
            ))),
            ModeConstants::PaperWkb => Ok(Eigenmode {
                n,
                energy: wkb_ground_energy(),
                norm: wkb_ground_norm(),
                constants,
            }),
            ModeConstants::Exact => {
                let zero = airy::airy_zero(n)?;
                let slope = airy::eval(-zero.a_n).ai_prime;
                Ok(Eigenmode { n, energy: zero.a_n, norm: 1.0 / slope.abs(), constants })
            }
        }
    }

    pub fn ground(constants: ModeConstants) -> Self {
        Eigenmode::new(1, constants).expect("ground state is always defined")
    }

    /// `psi_n(s)`; defined only above the floor.
    pub fn psi(&self, s: f64) -> Result<f64> {
        check_height(s)?;
        Ok(self.psi_unchecked(s))
    }

    pub fn psi_prime(&self, s: f64) -> Result<f64> {
        check_height(s)?;
        Ok(self.psi_and_slope(s).1)
    }

    pub(crate) fn psi_unchecked(&self, s: f64) -> f64 {
        self.norm * airy::eval(s - self.energy).ai
    }

    pub(crate) fn psi_and_slope(&self, s: f64) -> (f64, f64) {
        let v = airy::eval(s - self.energy);
        (self.norm * v.ai, self.norm * v.ai_prime)
    }
}

fn check_height(s: f64) -> Result<()> {
    if s >= 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("s = {s} is below the reflecting floor")))
    }
}

/// `I0(s) = int_0^s psi^2` by direct adaptive quadrature.
pub fn cumulative_i0(mode: &Eigenmode, s: f64, tol: f64) -> Result<f64> {
    check_height(s)?;
    let density = |y: f64| mode.psi_unchecked(y).powi(2);
    Ok(integrate(density, 0.0, s, tol, tol)?.value)
}

/// `int_0^inf psi^2`, which is one for exact constants.
pub fn normalization_integral(mode: &Eigenmode, abs_tol: f64) -> Result<SemiInfiniteResult> {
    integrate_to_infinity(|y| mode.psi_unchecked(y).powi(2), 0.0, abs_tol)
}

/// Precomputed `I0` for dense evaluation.
///
/// Cumulative values are stored on a uniform grid with spacing 0.01; an
/// off-grid value adds one Gauss–Kronrod panel from the node below. The
/// table is built eagerly and is read-only afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeProbability {
    mode: Eigenmode,
    step: f64,
    table: Vec<f64>,
}

impl CumulativeProbability {
    const STEP: f64 = 0.01;
    /// Past `S + 20` the density is below 1e-50.
    const REACH: f64 = 20.0;

    pub fn new(mode: &Eigenmode) -> Result<Self> {
        let step = Self::STEP;
        let nodes = ((mode.energy + Self::REACH) / step).ceil() as usize;
        let density = |y: f64| mode.psi_unchecked(y).powi(2);
        let mut table = Vec::with_capacity(nodes + 1);
        let mut acc = 0.0;
        table.push(acc);
        for i in 0..nodes {
            let (piece, _) = gauss_kronrod_15(&density, i as f64 * step, (i + 1) as f64 * step)?;
            acc += piece;
            table.push(acc);
        }
        Ok(CumulativeProbability { mode: *mode, step, table })
    }

    pub fn mode(&self) -> &Eigenmode {
        &self.mode
    }

    /// Value of `I0` as `s -> inf`.
    pub fn limit(&self) -> f64 {
        *self.table.last().expect("table is never empty")
    }

    pub fn value(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let i = (s / self.step).floor() as usize;
        if i + 1 >= self.table.len() {
            return self.limit();
        }
        let node = i as f64 * self.step;
        if s == node {
            return self.table[i];
        }
        let density = |y: f64| self.mode.psi_unchecked(y).powi(2);
        let (piece, _) = gauss_kronrod_15(&density, node, s).expect("density is finite");
        (self.table[i] + piece).clamp(self.table[i], self.table[i + 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_scaling() {
        let sc = PhysicalScaling::new(1.0, 1.0, 2f64.sqrt()).unwrap();
        assert!((sc.length_unit - 1.0).abs() < 1e-15);
        assert!((sc.energy_unit - 1.0).abs() < 1e-15);
        let sc = PhysicalScaling::new(2.0, 1.0, 2f64.sqrt()).unwrap();
        assert!((sc.length_unit - 0.25f64.cbrt()).abs() < 1e-15);
        assert!((sc.length_unit - 0.629_96).abs() < 1e-5);
        assert!((sc.s_to_height(sc.height_to_s(3.0)) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn neutron_scale() {
        // Neutron above a mirror: l_g is about 5.87 micrometres.
        let sc = PhysicalScaling::new(1.674_927_5e-27, 9.806_65, 1.054_571_8e-34).unwrap();
        assert!((sc.length_unit - 5.87e-6).abs() < 0.01e-6, "{}", sc.length_unit);
    }

    #[test]
    fn scaling_rejects_nonpositive() {
        assert!(PhysicalScaling::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalScaling::new(1.0, -9.8, 1.0).is_err());
        assert!(PhysicalScaling::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn mode_constants() {
        let exact = Eigenmode::ground(ModeConstants::Exact);
        assert!((exact.energy - 2.338_107_41).abs() < 1e-8);
        assert!((exact.norm - 1.426_10).abs() < 1e-5);
        let paper = Eigenmode::ground(ModeConstants::PaperWkb);
        assert!((paper.energy - 2.320_25).abs() < 1e-5);
        assert!((paper.norm - 1.436_12).abs() < 1e-5);
        let third = Eigenmode::new(3, ModeConstants::Exact).unwrap();
        assert!((third.energy - 5.520_559_83).abs() < 1e-8);
        assert!(Eigenmode::new(2, ModeConstants::PaperWkb).is_err());
        assert!(Eigenmode::new(0, ModeConstants::Exact).is_err());
    }

    #[test]
    fn psi_values() {
        let exact = Eigenmode::ground(ModeConstants::Exact);
        assert!(exact.psi(0.0).unwrap().abs() < 1e-9);
        let at_turning = exact.psi(exact.energy).unwrap();
        assert!((at_turning - 1.426_104_628_733_495 * airy::AI_0).abs() < 1e-12);
        assert!((at_turning - 0.506_30).abs() < 1e-5);
        let paper = Eigenmode::ground(ModeConstants::PaperWkb);
        assert!((paper.psi(0.0).unwrap() - 0.017_98).abs() < 1e-5);
        assert!(exact.psi(-0.1).is_err());
    }

    #[test]
    fn i0_edges() {
        let mode = Eigenmode::ground(ModeConstants::Exact);
        assert_eq!(cumulative_i0(&mode, 0.0, 1e-12).unwrap(), 0.0);
        let i2 = cumulative_i0(&mode, 2.0, 1e-12).unwrap();
        let i4 = cumulative_i0(&mode, 4.0, 1e-12).unwrap();
        assert!(i4 >= i2);
        assert!(cumulative_i0(&mode, -1.0, 1e-12).is_err());
    }

    #[test]
    fn cache_matches_direct_quadrature() {
        let mode = Eigenmode::ground(ModeConstants::Exact);
        let cache = CumulativeProbability::new(&mode).unwrap();
        for s in [0.0, 0.003, 0.5, 1.234_567, 2.338, 4.0, 7.77, 12.0, 30.0, 100.0] {
            let direct = cumulative_i0(&mode, s, 1e-14).unwrap();
            assert!((cache.value(s) - direct).abs() < 1e-12, "s = {s}");
        }
        assert!((cache.limit() - 1.0).abs() < 1e-12);
    }
}
