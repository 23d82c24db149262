//! Classical Ermakov–Lewis machinery for the bouncer.
//!
//! Reading `s` as time, `q = psi`, `p = psi'` move under the inverted
//! oscillator `H = p^2/2 - (s - S) q^2/2`. A Pinney function
//! `rho = N sqrt(A Ai^2 + 2B Ai Bi + C Bi^2)` (arguments `s - S`) solves
//! `rho'' - (s - S) rho = h^2 / rho^3` with `h^2 = N^4 (AC - B^2) / pi^2`,
//! and builds the invariant
//! `I = (rho psi' - rho' psi)^2 / 2 + h^2 (psi / rho)^2 / 2`.
//!
//! The ground-state Pinney function uses `(A, B, C) = (1, 1, 2)`, i.e.
//! `(Ai + Bi)^2 + Bi^2`. With the WKB prefactor that gives `h^2 ~ 0.431`,
//! not 1, so every entry point takes the strength explicitly.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::airy;
use crate::bouncer::{Eigenmode, ModeConstants};
use crate::error::{Error, Result};
use crate::numerics::{derivative, integrate, DerivativeOrder};

/// Quadratic form `(A, B, C)` in `(Ai, Bi)` under the square root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadraticForm {
    /// `(Ai + Bi)^2 + Bi^2`.
    pub const GROUND_STATE: QuadraticForm = QuadraticForm { a: 1.0, b: 1.0, c: 2.0 };

    pub fn discriminant(&self) -> f64 {
        self.a * self.c - self.b * self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PinneyFunction {
    shift: f64,
    prefactor: f64,
    form: QuadraticForm,
    h_squared: f64,
}

/// `rho` and its first two derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PinneyPoint {
    pub rho: f64,
    pub rho_prime: f64,
    pub rho_second: f64,
}

/// `rho = rho_scaled e^zeta`, `rho' = rho_prime_scaled e^zeta`.
#[derive(Debug, Clone, Copy)]
struct ScaledPinney {
    rho: f64,
    rho_prime: f64,
    /// `(AC - B^2) W^2 / Q_s^{3/2}`, to be multiplied by `N e^{-3 zeta}`.
    curvature: f64,
    zeta: f64,
    /// Scaled Ai and Ai' at the same argument, reused for the invariant.
    ai: f64,
    ai_prime: f64,
}

impl PinneyFunction {
    /// The ground-state Pinney function with the given mode constants.
    pub fn new(constants: ModeConstants) -> Self {
        let mode = Eigenmode::ground(constants);
        Self::with_form(mode.energy, mode.norm, QuadraticForm::GROUND_STATE)
            .expect("ground-state form is positive definite")
    }

    pub fn with_form(shift: f64, prefactor: f64, form: QuadraticForm) -> Result<Self> {
        if !(prefactor > 0.0 && shift.is_finite() && prefactor.is_finite()) {
            return Err(Error::invalid("Pinney prefactor must be positive and the shift finite"));
        }
        if !(form.a > 0.0 && form.discriminant() > 0.0) {
            return Err(Error::invalid("quadratic form must be positive definite"));
        }
        let n2 = prefactor * prefactor;
        let h_squared = n2 * n2 * form.discriminant() / (PI * PI);
        Ok(PinneyFunction { shift, prefactor, form, h_squared })
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }

    pub fn form(&self) -> QuadraticForm {
        self.form
    }

    /// Strength of the inverse-cube term for which this `rho` is exact.
    pub fn h_squared(&self) -> f64 {
        self.h_squared
    }

    fn scaled(&self, s: f64) -> ScaledPinney {
        let sa = airy::eval_scaled(s - self.shift);
        let v = sa.values;
        let QuadraticForm { a, b, c } = self.form;
        let e2 = (-2.0 * sa.zeta).exp();
        let q = a * v.ai * v.ai * e2 * e2 + 2.0 * b * v.ai * v.bi * e2 + c * v.bi * v.bi;
        let half_dq = a * v.ai * v.ai_prime * e2 * e2
            + b * (v.ai_prime * v.bi + v.ai * v.bi_prime) * e2
            + c * v.bi * v.bi_prime;
        let w = v.ai * v.bi_prime - v.ai_prime * v.bi;
        let root = q.sqrt();
        ScaledPinney {
            rho: self.prefactor * root,
            rho_prime: self.prefactor * half_dq / root,
            curvature: self.form.discriminant() * w * w / (q * root),
            zeta: sa.zeta,
            ai: v.ai,
            ai_prime: v.ai_prime,
        }
    }

    /// `rho`, `rho'`, `rho''` from the Airy identities `Ai'' = x Ai`,
    /// `Bi'' = x Bi`; no finite differences involved.
    pub fn eval(&self, s: f64) -> PinneyPoint {
        let sp = self.scaled(s);
        let grow = sp.zeta.exp();
        let rho = sp.rho * grow;
        let correction = self.prefactor * sp.curvature * (-3.0 * sp.zeta).exp();
        PinneyPoint {
            rho,
            rho_prime: sp.rho_prime * grow,
            rho_second: (s - self.shift) * rho + correction,
        }
    }

    pub fn rho(&self, s: f64) -> f64 {
        self.eval(s).rho
    }

    pub fn ln_rho(&self, s: f64) -> f64 {
        let sp = self.scaled(s);
        sp.rho.ln() + sp.zeta
    }

    /// `1 / rho^2`, finite even where `rho` itself would overflow.
    pub fn inverse_rho_squared(&self, s: f64) -> f64 {
        let sp = self.scaled(s);
        (-2.0 * sp.zeta).exp() / (sp.rho * sp.rho)
    }
}

/// `rho'' - (s - S) rho - h^2_test / rho^3`.
pub fn mp_residual(pf: &PinneyFunction, s: f64, h_squared_test: f64) -> f64 {
    let p = pf.eval(s);
    p.rho_second - (s - pf.shift) * p.rho - h_squared_test / p.rho.powi(3)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonTriplet {
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
}

impl EpsilonTriplet {
    /// `(rho^2, -rho rho', rho'^2 + h^2 / rho^2)`.
    pub fn from_pinney(pf: &PinneyFunction, s: f64, h_squared: f64) -> Self {
        let p = pf.eval(s);
        EpsilonTriplet {
            eps1: p.rho * p.rho,
            eps2: -p.rho * p.rho_prime,
            eps3: p.rho_prime * p.rho_prime + h_squared / (p.rho * p.rho),
        }
    }

    fn as_array(&self) -> [f64; 3] {
        [self.eps1, self.eps2, self.eps3]
    }

    /// `eps1 eps3 - eps2^2`, the Pinney first integral (equals `h^2`).
    pub fn first_integral(&self) -> f64 {
        self.eps1 * self.eps3 - self.eps2 * self.eps2
    }
}

/// Poisson brackets of `T1 = p^2/2`, `T2 = pq`, `T3 = q^2/2`:
/// `{T_n, T_m} = sum_r C[r][n][m] T_r`.
const STRUCTURE: [[[f64; 3]; 3]; 3] = [
    // r = 1: {T1, T2} = -2 T1
    [[0.0, -2.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
    // r = 2: {T1, T3} = -T2
    [[0.0, 0.0, -1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]],
    // r = 3: {T2, T3} = -2 T3
    [[0.0, 0.0, 0.0], [0.0, 0.0, -2.0], [0.0, 2.0, 0.0]],
];

/// Coefficients `h_m` of `H = h_1 T1 + h_2 T2 + h_3 T3` at time `s`.
fn hamiltonian_coefficients(s: f64, shift: f64) -> [f64; 3] {
    [1.0, 0.0, -(s - shift)]
}

/// Individual terms `-C[r][n][m] h_m eps_n` of the right-hand side of
/// `d eps_r / ds`.
fn epsilon_rhs_terms(eps: [f64; 3], h: [f64; 3]) -> [Vec<f64>; 3] {
    std::array::from_fn(|r| {
        let mut terms = Vec::new();
        for n in 0..3 {
            for m in 0..3 {
                let c = STRUCTURE[r][n][m];
                if c != 0.0 && h[m] != 0.0 {
                    terms.push(-c * h[m] * eps[n]);
                }
            }
        }
        terms
    })
}

/// Residuals of the epsilon system `d eps_r/ds + sum C h eps = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonResidual {
    /// `d eps_r/ds - rhs_r`, derivatives by central differences.
    pub raw: [f64; 3],
    /// Sum of magnitudes of the terms entering each residual.
    pub scale: [f64; 3],
}

impl EpsilonResidual {
    pub fn relative(&self) -> [f64; 3] {
        std::array::from_fn(|r| self.raw[r] / self.scale[r].max(f64::MIN_POSITIVE))
    }

    pub fn max_relative(&self) -> f64 {
        self.relative().into_iter().map(f64::abs).fold(0.0, f64::max)
    }
}

/// Epsilon-system residuals at `s` with `eps3` built from `h_squared`.
///
/// `eps1` grows like `e^{2 zeta}`, so the residuals are also reported
/// relative to the size of the terms that cancel.
pub fn epsilon_system_residual(pf: &PinneyFunction, s: f64, h_squared: f64) -> EpsilonResidual {
    let step = DerivativeOrder::First.default_step();
    let eps = EpsilonTriplet::from_pinney(pf, s, h_squared).as_array();
    let rhs = epsilon_rhs_terms(eps, hamiltonian_coefficients(s, pf.shift));
    let mut raw = [0.0; 3];
    let mut scale = [0.0; 3];
    for r in 0..3 {
        let slope = derivative(
            |t| EpsilonTriplet::from_pinney(pf, t, h_squared).as_array()[r],
            s,
            DerivativeOrder::First,
            step,
        );
        let rhs_sum: f64 = rhs[r].iter().sum();
        raw[r] = slope - rhs_sum;
        scale[r] = slope.abs() + rhs[r].iter().map(|t| t.abs()).sum::<f64>();
    }
    EpsilonResidual { raw, scale }
}

/// Generalized Lewis invariant at `s`.
///
/// Evaluated from exponentially scaled Airy values, so it stays finite
/// wherever `rho` and `psi` individually overflow or underflow.
pub fn lewis_invariant(pf: &PinneyFunction, mode: &Eigenmode, s: f64, h_squared_test: f64) -> Result<f64> {
    if mode.energy != pf.shift {
        return Err(Error::invalid(format!(
            "mode energy {} differs from the Pinney shift {}",
            mode.energy, pf.shift
        )));
    }
    if !(s >= 0.0) {
        return Err(Error::invalid(format!("s = {s} is below the floor")));
    }
    let sp = pf.scaled(s);
    let wronskian_like = mode.norm * (sp.rho * sp.ai_prime - sp.rho_prime * sp.ai);
    let ratio = mode.norm * sp.ai * (-2.0 * sp.zeta).exp() / sp.rho;
    Ok(0.5 * wronskian_like * wronskian_like + 0.5 * h_squared_test * ratio * ratio)
}

/// Closed-form value of the invariant when `h^2_test = h^2`:
/// `C N_psi^2 N^2 W^2 / 2`.
pub fn lewis_invariant_constant(pf: &PinneyFunction, mode: &Eigenmode) -> f64 {
    let w = 1.0 / PI;
    0.5 * pf.form.c * (mode.norm * pf.prefactor * w).powi(2)
}

/// Dynamical, geometric and total Lewis angles accumulated over `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleBreakdown {
    #[serde(rename = "T")]
    pub upper: f64,
    pub dynamical: f64,
    pub geometric: f64,
    pub total: f64,
}

/// Lewis angles up to `T`.
///
/// With `B = [rho' rho]_0^T` and `K = int_0^T rho'^2`:
/// dynamical `= total - B/2 + K`, geometric `= B/2 - K`,
/// total `= int_0^T rho^-2`. The total-derivative term is taken as the
/// boundary value `B` rather than integrated.
pub fn lewis_angles(pf: &PinneyFunction, upper: f64, tol: f64) -> Result<AngleBreakdown> {
    if !(upper >= 0.0 && upper.is_finite()) {
        return Err(Error::invalid(format!("upper limit T = {upper} must be finite and nonnegative")));
    }
    if upper == 0.0 {
        return Ok(AngleBreakdown { upper, dynamical: 0.0, geometric: 0.0, total: 0.0 });
    }
    let total = integrate(|t| pf.inverse_rho_squared(t), 0.0, upper, tol, tol)?.value;
    let kinetic = integrate(|t| pf.eval(t).rho_prime.powi(2), 0.0, upper, tol, tol)?.value;
    let (start, end) = (pf.eval(0.0), pf.eval(upper));
    let boundary = end.rho * end.rho_prime - start.rho * start.rho_prime;
    Ok(AngleBreakdown {
        upper,
        dynamical: total - 0.5 * boundary + kinetic,
        geometric: 0.5 * boundary - kinetic,
        total,
    })
}

/// Lewis angles at every point of an increasing grid of upper limits.
///
/// The integrals are accumulated panel by panel between neighbouring
/// grid points, so the total angle is nondecreasing even where its
/// increments fall below the quadrature noise of a fresh integral from 0.
pub fn lewis_angles_on_grid(pf: &PinneyFunction, uppers: &[f64], tol: f64) -> Result<Vec<AngleBreakdown>> {
    if let Some(&first) = uppers.first() {
        if !(first >= 0.0) {
            return Err(Error::invalid(format!("upper limit T = {first} must be nonnegative")));
        }
    }
    if uppers.windows(2).any(|w| !(w[1] > w[0])) || uppers.iter().any(|t| !t.is_finite()) {
        return Err(Error::invalid("upper limits must be finite and strictly increasing"));
    }
    let start = pf.eval(0.0);
    let start_product = start.rho * start.rho_prime;
    let (mut total, mut kinetic, mut previous) = (0.0, 0.0, 0.0);
    let mut out = Vec::with_capacity(uppers.len());
    for &upper in uppers {
        if upper > previous {
            total += integrate(|t| pf.inverse_rho_squared(t), previous, upper, tol, tol)?.value;
            kinetic += integrate(|t| pf.eval(t).rho_prime.powi(2), previous, upper, tol, tol)?.value;
        }
        previous = upper;
        if upper == 0.0 {
            out.push(AngleBreakdown { upper, dynamical: 0.0, geometric: 0.0, total: 0.0 });
            continue;
        }
        let end = pf.eval(upper);
        let boundary = end.rho * end.rho_prime - start_product;
        out.push(AngleBreakdown {
            upper,
            dynamical: total - 0.5 * boundary + kinetic,
            geometric: 0.5 * boundary - kinetic,
            total,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalState {
    /// Coordinate, identified with psi.
    pub q: f64,
    /// Momentum, identified with psi'.
    pub p: f64,
    /// Hamiltonian time, identified with the height s.
    pub s: f64,
}

impl ClassicalState {
    pub fn along_mode(mode: &Eigenmode, s: f64) -> Result<Self> {
        Ok(ClassicalState { q: mode.psi(s)?, p: mode.psi_prime(s)?, s })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianValue {
    pub value: f64,
    /// `p^2 / 2`
    pub t1: f64,
    /// `p q`
    pub t2: f64,
    /// `q^2 / 2`
    pub t3: f64,
}

/// `H = T1 - (s - S) T3` with the algebra generators alongside.
pub fn hamiltonian_value(state: &ClassicalState, shift: f64) -> HamiltonianValue {
    let t1 = 0.5 * state.p * state.p;
    let t2 = state.p * state.q;
    let t3 = 0.5 * state.q * state.q;
    let h = hamiltonian_coefficients(state.s, shift);
    HamiltonianValue { value: h[0] * t1 + h[1] * t2 + h[2] * t3, t1, t2, t3 }
}
